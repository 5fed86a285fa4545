#include "scy/symbolic/derivation.hpp"

#include <stdexcept>

namespace scy::symbolic {

FormExpr torsion_form(int i) {
    return sum12x2([i](int j, int k) {
        return sym("N", {idx(i)}, {bar(j), bar(k)}) * FormExpr::theta_bar(j) * FormExpr::theta_bar(k);
    });
}

FormExpr curvature_form(int i, int j) {
    return sum12x2([i, j](int k, int l) {
        return sym("R", {idx(i)}, {idx(j), idx(k), bar(l)}) * FormExpr::theta(k) * FormExpr::theta_bar(l) +
               sym("K", {idx(i)}, {idx(j), idx(k), idx(l)}) * FormExpr::theta(k) * FormExpr::theta(l) +
               sym("Kb", {idx(i)}, {idx(j), bar(k), bar(l)}) * FormExpr::theta_bar(k) * FormExpr::theta_bar(l);
    });
}

FormExpr DerivationContext::d_generator(Gen g) const {
    if (g >= 8 || g == 2 || g == 3) return conj(d_generator(conj_gen(g)));
    if (g < 2) {
        int i = g + 1;
        FormExpr out = sum12([i](int j) { return -(FormExpr::conn(i, j) * FormExpr::theta(j)); });
        if (torsion_) out += torsion_form(i);
        return out;
    }
    int i = (g - 4) / 2 + 1;
    int j = (g - 4) % 2 + 1;
    FormExpr out = sum12([i, j](int k) { return -(FormExpr::conn(i, k) * FormExpr::conn(k, j)); });
    out += curvature_form(i, j);
    return out;
}

FormExpr DerivationContext::d_symbol(const Symbol& s) const {
    const FamilyInfo& info = family(s.family);
    if (!info.differentiable) {
        throw std::invalid_argument("no derivative rule registered for family " + s.family);
    }
    if (s.conjugated) {
        Symbol plain = s;
        plain.conjugated = false;
        return conj(d_symbol(plain));
    }
    FormExpr out;
    for (int p = 1; p <= 2; ++p) {
        out += FormExpr::symbol(with_derivative(s, idx(p))) * FormExpr::theta(p);
        out += FormExpr::symbol(with_derivative(s, bar(p))) * FormExpr::theta_bar(p);
    }
    // upper slots: - T^{..q..} w^{i}_q
    for (std::size_t u = 0; u < s.upper.size(); ++u) {
        for (int q = 1; q <= 2; ++q) {
            Symbol t = s;
            t.upper[u] = idx(q);
            out -= FormExpr::symbol(t) * FormExpr::conn(s.upper[u].value, q);
        }
    }
    // lower and derivative slots: + T_{..q..} w^q_j, barred ones use conj(w^q_k)
    auto lower_slots = [&](std::vector<Index> Symbol::*member) {
        const std::vector<Index>& slots = s.*member;
        for (std::size_t l = 0; l < slots.size(); ++l) {
            for (int q = 1; q <= 2; ++q) {
                Symbol t = s;
                (t.*member)[l] = Index{static_cast<std::uint8_t>(q), slots[l].barred};
                Gen w = slots[l].barred ? conn_bar_gen(q, slots[l].value) : conn_gen(q, slots[l].value);
                out += FormExpr::symbol(t) * FormExpr::generator(w);
            }
        }
    };
    lower_slots(&Symbol::lower);
    lower_slots(&Symbol::derivs);
    return out;
}

FormExpr ext_d(const FormExpr& e, const DerivationContext& ctx) {
    FormExpr out;
    for (const auto& [key, c] : e.terms()) {
        FormExpr word_form;
        word_form.add_term(Coeff(1), {}, key.word);

        // d(coefficient) ^ word
        for (std::size_t k = 0; k < key.factors.size(); ++k) {
            const Factor& f = key.factors[k];
            std::vector<Factor> rest = key.factors;
            rest[k].twice_power -= 2;
            FormExpr pre;
            pre.add_term(c * Coeff(Rational(f.twice_power, 2)), rest, {});
            out += pre * ctx.d_symbol(f.symbol) * word_form;
        }

        // coefficient * d(word), graded Leibniz
        FormExpr scalar;
        scalar.add_term(c, key.factors, {});
        for (std::size_t j = 0; j < key.word.size(); ++j) {
            FormExpr left;
            left.add_term(Coeff(1), {}, Word(key.word.begin(), key.word.begin() + static_cast<long>(j)));
            FormExpr right;
            right.add_term(Coeff(1), {}, Word(key.word.begin() + static_cast<long>(j) + 1, key.word.end()));
            Coeff sign = (j % 2 == 0) ? Coeff(1) : Coeff(-1);
            out += sign * (scalar * left * ctx.d_generator(key.word[j]) * right);
        }
    }
    return out;
}

}  // namespace scy::symbolic
