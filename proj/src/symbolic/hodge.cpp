#include "scy/symbolic/hodge.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace scy::symbolic {

namespace {

int sort_sign(Word& w) {
    int sign = 1;
    for (std::size_t a = 1; a < w.size(); ++a) {
        for (std::size_t b = a; b > 0 && w[b - 1] >= w[b]; --b) {
            if (w[b - 1] == w[b]) throw std::logic_error("hodge table: repeated generator");
            std::swap(w[b - 1], w[b]);
            sign = -sign;
        }
    }
    return sign;
}

using Table = std::map<Word, std::pair<int, Word>>;

void put(Table& t, Word in, int coeff, Word out) {
    int s = sort_sign(in) * sort_sign(out) * coeff;
    auto [it, inserted] = t.try_emplace(in, s, out);
    if (!inserted && (it->second.first != s || it->second.second != out)) {
        throw std::logic_error("hodge table rows disagree");
    }
}

Table build_table() {
    Table t;
    auto T = [](int i) { return theta_gen(i); };
    auto B = [](int i) { return theta_bar_gen(i); };
    for (int i = 1; i <= 2; ++i) {
        const int h = 3 - i;
        put(t, {T(i), B(i), T(h), B(h)}, -1, {});
        put(t, {T(i)}, 1, {T(i), T(h), B(h)});
        put(t, {B(i)}, -1, {B(i), T(h), B(h)});
        put(t, {T(i), T(h), B(h)}, -1, {T(i)});
        put(t, {T(i), T(h), B(i)}, 1, {T(h)});
        put(t, {T(h), B(h), B(i)}, 1, {B(i)});
        put(t, {T(i), B(h), B(i)}, -1, {B(h)});
        put(t, {T(i), T(h)}, 1, {T(i), T(h)});
        put(t, {B(i), B(h)}, 1, {B(i), B(h)});
        put(t, {T(i), B(i)}, 1, {T(h), B(h)});
        put(t, {T(i), B(h)}, -1, {T(i), B(h)});
    }
    // Degree 0 is fixed by the defining pairing with beta = gamma = 1.
    put(t, {}, -1, {T(1), B(1), T(2), B(2)});
    if (t.size() != 16) throw std::logic_error("hodge table is incomplete");
    return t;
}

const Table& table() {
    static const Table t = build_table();
    return t;
}

}  // namespace

std::vector<Word> basis_words() {
    std::vector<Word> out;
    for (int mask = 0; mask < 16; ++mask) {
        Word w;
        for (Gen g = 0; g < 4; ++g) {
            if (mask & (1 << g)) w.push_back(g);
        }
        out.push_back(w);
    }
    std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
    return out;
}

std::pair<int, Word> hodge_of_basis(const Word& w) {
    auto it = table().find(w);
    if (it == table().end()) throw std::invalid_argument("hodge_of_basis: not a canonical basis word");
    return it->second;
}

FormExpr hodge_star(const FormExpr& e) {
    if (e.has_connection()) {
        throw std::invalid_argument("hodge_star: expression contains connection forms");
    }
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        auto [sign, w] = hodge_of_basis(k.word);
        out.add_term(sign > 0 ? c : -c, k.factors, w);
    }
    return out;
}

FormExpr volume_form() {
    return -(FormExpr::theta(1) * FormExpr::theta_bar(1) * FormExpr::theta(2) * FormExpr::theta_bar(2));
}

FormExpr hermitian_pairing(const FormExpr& b, const FormExpr& c) {
    static const Coeff vol = top_coefficient(volume_form()).terms().begin()->second;
    return top_coefficient(b * conj(hodge_star(c))) * (Coeff(1) / vol);
}

FormExpr bilinear_pairing(const FormExpr& b, const FormExpr& c) { return hermitian_pairing(b, conj(c)); }

FormExpr kahler_form() {
    return Coeff::i() * sum12([](int i) { return FormExpr::theta(i) * FormExpr::theta_bar(i); });
}

}  // namespace scy::symbolic
