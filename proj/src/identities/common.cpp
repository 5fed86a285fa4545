#include "common.hpp"

#include <stdexcept>

namespace scy::identities::detail {

FormExpr al(int i, std::vector<Index> derivs) { return sym("alpha", {}, {idx(i)}, std::move(derivs)); }

FormExpr nij(int i, int j, int k, std::vector<Index> derivs) {
    return sym("N", {idx(i)}, {bar(j), bar(k)}, std::move(derivs));
}

FormExpr rcurv(int j, int i, int k, int l) { return sym("R", {idx(j)}, {idx(i), idx(k), bar(l)}); }

FormExpr kbar(int j, int i, int k, int l) { return sym("Kb", {idx(j)}, {idx(i), bar(k), bar(l)}); }

FormExpr alpha_form() {
    return sum12([](int i) { return al(i) * t(i); });
}

FormExpr dp(const FormExpr& e) { return at_point(ext_d(e)); }

FormExpr top_ratio(const FormExpr& num, const FormExpr& den) {
    FormExpr d = top_coefficient(den);
    if (d.size() != 1 || !d.terms().begin()->first.factors.empty()) {
        throw std::invalid_argument("top_ratio: denominator is not a numeric top form");
    }
    return top_coefficient(num) * (Coeff(1) / d.terms().begin()->second);
}

FormExpr laplace_trace(const FormExpr& x) {
    FormExpr w = kahler_form();
    return top_ratio(Coeff(2) * (w * x), w * w);
}

FormExpr dc(const FormExpr& u) {
    FormExpr du = dp(u);
    return Coeff::frac(1, 2) * Coeff::i() * (type_part(du, 0, 1) - type_part(du, 1, 0));
}

FormExpr codiff(const FormExpr& e) { return -hodge_star(dp(hodge_star(e))); }

FormExpr null_form(int i) { return at_point(ext_d(ext_d(al(i)))); }

const CommutationRules& commutation_rules() {
    static const CommutationRules rules = [] {
        std::map<Symbol, FormExpr> c1, c2;
        for (int i = 1; i <= 2; ++i) {
            FormExpr nf = null_form(i);
            FormExpr p11 = type_part(nf, 1, 1);
            for (int k = 1; k <= 2; ++k) {
                for (int l = 1; l <= 2; ++l) {
                    Symbol target = make_symbol("alpha", {}, {idx(i)}, {idx(k), bar(l)});
                    c1[target] = solve_for(coefficient_of(p11, {theta_gen(k), theta_bar_gen(l)}), target);
                }
            }
            Symbol target = make_symbol("alpha", {}, {idx(i)}, {bar(2), bar(1)});
            c2[target] = solve_for(coefficient_of(type_part(nf, 0, 2), {theta_bar_gen(1), theta_bar_gen(2)}), target);
        }
        return CommutationRules{table_rule("ID-COMM1", std::move(c1)), table_rule("ID-COMM2", std::move(c2))};
    }();
    return rules;
}

FormExpr apply_logged(Trace& tr, const std::string& tag, const FormExpr& e, const std::vector<RewriteRule>& rules,
                      bool axiom) {
    RewriteStats stats;
    FormExpr out = rewrite(e, rules, &stats);
    int n = 0;
    for (const auto& [k, v] : stats) n += v;
    if (axiom) {
        tr.axiom(tag, n);
    } else {
        tr.relation(tag);
    }
    tr.step("rewrite with " + tag + ": " + std::to_string(n) + " replacements");
    return out;
}

}  // namespace scy::identities::detail
