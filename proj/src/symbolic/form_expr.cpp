#include "scy/symbolic/form_expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace scy::symbolic {

Gen theta_gen(int i) { return static_cast<Gen>(i - 1); }
Gen theta_bar_gen(int i) { return static_cast<Gen>(1 + i); }
Gen conn_gen(int i, int j) { return static_cast<Gen>(4 + 2 * (i - 1) + (j - 1)); }
Gen conn_bar_gen(int i, int j) { return static_cast<Gen>(8 + 2 * (i - 1) + (j - 1)); }

Gen conj_gen(Gen g) {
    if (g < 2) return static_cast<Gen>(g + 2);
    if (g < 4) return static_cast<Gen>(g - 2);
    if (g < 8) return static_cast<Gen>(g + 4);
    return static_cast<Gen>(g - 4);
}

bool is_connection(Gen g) { return g >= kFrameGenerators; }
bool is_barred_frame(Gen g) { return g == 2 || g == 3; }

std::string gen_name(Gen g) {
    if (g < 2) return "t" + std::to_string(g + 1);
    if (g < 4) return "~t" + std::to_string(g - 1);
    int k = g < 8 ? g - 4 : g - 8;
    std::string base = "w" + std::to_string(k / 2 + 1) + std::to_string(k % 2 + 1);
    return g < 8 ? base : "~" + base;
}

namespace {

// Sorts a word in place; returns the permutation sign, or 0 on a repeat.
int sort_word(Word& w) {
    int sign = 1;
    for (std::size_t a = 1; a < w.size(); ++a) {
        for (std::size_t b = a; b > 0 && w[b - 1] >= w[b]; --b) {
            if (w[b - 1] == w[b]) return 0;
            std::swap(w[b - 1], w[b]);
            sign = -sign;
        }
    }
    return sign;
}

// Canonicalizes and merges factors; returns the sign (0 if the product vanishes).
int merge_factors(std::vector<Factor>& factors) {
    int sign = 1;
    for (auto& f : factors) {
        CanonicalSymbol c = canonicalize(f.symbol);
        if (c.sign == 0) {
            if (f.twice_power > 0) return 0;
            throw std::domain_error("negative power of an identically vanishing symbol");
        }
        if (c.sign < 0) {
            if (f.twice_power % 2 != 0) {
                throw std::domain_error("half-integer power of an antisymmetric component");
            }
            if ((f.twice_power / 2) % 2 != 0) sign = -sign;
        }
        f.symbol = std::move(c.symbol);
    }
    std::sort(factors.begin(), factors.end(),
              [](const Factor& x, const Factor& y) { return x.symbol < y.symbol; });
    std::vector<Factor> merged;
    for (auto& f : factors) {
        if (!merged.empty() && merged.back().symbol == f.symbol) {
            merged.back().twice_power += f.twice_power;
        } else {
            merged.push_back(std::move(f));
        }
    }
    std::erase_if(merged, [](const Factor& f) { return f.twice_power == 0; });
    factors = std::move(merged);
    return sign;
}

bool has_conn(const Word& w) {
    return std::any_of(w.begin(), w.end(), [](Gen g) { return is_connection(g); });
}

}  // namespace

FormExpr::FormExpr(const std::vector<Monomial>& raw) {
    for (const auto& m : raw) add_term(m.coeff, m.factors, m.word);
}

void FormExpr::add_term(const Coeff& c, std::vector<Factor> factors, Word word) {
    if (c.is_zero()) return;
    if (word.size() > static_cast<std::size_t>(kMaxDegree)) return;
    for (Gen g : word) {
        if (g >= kGenerators) throw std::invalid_argument("generator out of range");
    }
    int s = sort_word(word);
    if (s == 0) return;
    int fs = merge_factors(factors);
    if (fs == 0) return;
    Coeff coeff = c;
    if (s * fs < 0) coeff = -coeff;
    MonomialKey key{std::move(factors), std::move(word)};
    auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

FormExpr FormExpr::constant(const Coeff& c) {
    FormExpr e;
    e.add_term(c, {}, {});
    return e;
}

FormExpr FormExpr::symbol(const Symbol& s, int twice_power) {
    FormExpr e;
    e.add_term(Coeff(1), {Factor{s, twice_power}}, {});
    return e;
}

FormExpr FormExpr::generator(Gen g) {
    FormExpr e;
    e.add_term(Coeff(1), {}, {g});
    return e;
}

bool FormExpr::has_connection() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const auto& kv) { return has_conn(kv.first.word); });
}

bool FormExpr::is_homogeneous() const {
    if (terms_.empty()) return true;
    std::size_t d = terms_.begin()->first.word.size();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& kv) { return kv.first.word.size() == d; });
}

int FormExpr::degree() const {
    return terms_.empty() ? 0 : static_cast<int>(terms_.begin()->first.word.size());
}

FormExpr& FormExpr::operator+=(const FormExpr& o) {
    for (const auto& [k, c] : o.terms_) {
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

FormExpr& FormExpr::operator-=(const FormExpr& o) { return *this += -o; }

FormExpr FormExpr::operator-() const {
    FormExpr out = *this;
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
}

FormExpr& FormExpr::operator*=(const Coeff& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

FormExpr operator*(const FormExpr& a, const FormExpr& b) {
    FormExpr out;
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            if (ka.word.size() + kb.word.size() > static_cast<std::size_t>(kMaxDegree)) continue;
            std::vector<Factor> f = ka.factors;
            f.insert(f.end(), kb.factors.begin(), kb.factors.end());
            Word w = ka.word;
            w.insert(w.end(), kb.word.begin(), kb.word.end());
            out.add_term(ca * cb, std::move(f), std::move(w));
        }
    }
    return out;
}

FormExpr wedge(const FormExpr& a, const FormExpr& b) { return a * b; }

FormExpr conj(const FormExpr& e) {
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        std::vector<Factor> f;
        f.reserve(k.factors.size());
        for (const auto& x : k.factors) f.push_back(Factor{conj(x.symbol), x.twice_power});
        Word w;
        w.reserve(k.word.size());
        for (Gen g : k.word) w.push_back(conj_gen(g));
        out.add_term(c.conj(), std::move(f), std::move(w));
    }
    return out;
}

FormExpr normal_form(const FormExpr& e) {
    FormExpr out;
    for (const auto& [k, c] : e.terms()) out.add_term(c, k.factors, k.word);
    return out;
}

FormExpr apply_symmetries(const FormExpr& e) { return normal_form(e); }

FormExpr type_part(const FormExpr& e, int p, int q) {
    if (e.has_connection()) {
        throw std::invalid_argument("type_part: expression still contains connection forms");
    }
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        int nb = static_cast<int>(std::count_if(k.word.begin(), k.word.end(), is_barred_frame));
        int nu = static_cast<int>(k.word.size()) - nb;
        if (nu == p && nb == q) out.add_term(c, k.factors, k.word);
    }
    return out;
}

FormExpr at_point(const FormExpr& e) {
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        if (!has_conn(k.word)) out.add_term(c, k.factors, k.word);
    }
    return out;
}

FormExpr coefficient_of(const FormExpr& e, const Word& word) {
    Word w = word;
    int s = sort_word(w);
    if (s == 0) throw std::invalid_argument("coefficient_of: word has a repeated generator");
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        if (k.word == w) out.add_term(s > 0 ? c : -c, k.factors, {});
    }
    return out;
}

FormExpr top_coefficient(const FormExpr& e) { return coefficient_of(e, Word{0, 1, 2, 3}); }

FormExpr real_part(const FormExpr& e) { return Coeff::frac(1, 2) * (e + conj(e)); }

FormExpr sym(const std::string& fam, std::vector<Index> upper, std::vector<Index> lower,
             std::vector<Index> derivs) {
    return FormExpr::symbol(make_symbol(fam, std::move(upper), std::move(lower), std::move(derivs)));
}

FormExpr sym_pow(const std::string& fam, std::vector<Index> lower, int twice_power) {
    return FormExpr::symbol(make_symbol(fam, {}, std::move(lower)), twice_power);
}

}  // namespace scy::symbolic
