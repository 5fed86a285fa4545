// Star table, dd^c, the Laplacian and the commutation relations.
#include "common.hpp"

namespace scy::identities::detail {

namespace {

FormExpr from_word(const Word& w) {
    FormExpr e = FormExpr::constant(1);
    for (Gen g : w) e = e * FormExpr::generator(g);
    return e;
}

FormExpr f_d(std::vector<Index> derivs) { return sym("f", {}, {}, std::move(derivs)); }

// Rules for second derivatives of a real scalar, solved from dd f = 0.
std::vector<RewriteRule> scalar_rules(Trace& tr) {
    FormExpr ddf = dp(dp(sym("f")));
    tr.step("dd f at a point");
    std::map<Symbol, FormExpr> table;
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            Symbol target = make_symbol("f", {}, {}, {bar(j), idx(i)});
            table[target] = solve_for(coefficient_of(ddf, {theta_gen(i), theta_bar_gen(j)}), target);
        }
    }
    Symbol s20 = make_symbol("f", {}, {}, {idx(2), idx(1)});
    table[s20] = solve_for(coefficient_of(ddf, {theta_gen(1), theta_gen(2)}), s20);
    Symbol s02 = make_symbol("f", {}, {}, {bar(2), bar(1)});
    table[s02] = solve_for(coefficient_of(ddf, {theta_bar_gen(1), theta_bar_gen(2)}), s02);
    tr.step("solved dd f = 0 for f_{~j i}, f_{21}, f_{~2~1}");
    return {table_rule("ddf", std::move(table))};
}

FormExpr ddc_f_reduced(Trace& tr) {
    auto rules = scalar_rules(tr);
    FormExpr ddc = dp(dc(sym("f")));
    tr.step("dd^c f = d((i/2)(dbar f - del f))");
    return apply_logged(tr, "ddf", ddc, rules, false);
}

FormExpr lap_alpha_expected() {
    return sum12x2([](int i, int j) {
        return al(i, {idx(j)}) * conj(al(i, {idx(j)})) + al(i, {bar(j)}) * conj(al(i, {bar(j)})) +
               al(i, {idx(j), bar(j)}) * conj(al(i)) + al(i) * conj(al(i, {bar(j), idx(j)}));
    });
}

}  // namespace

FormExpr glz_engine() {
    FormExpr body = sum12([](int i) {
        return f_d({bar(i)}) * conj(torsion_form(i)) - f_d({idx(i)}) * torsion_form(i);
    });
    body += sum12x2([](int i, int j) { return f_d({idx(i), bar(j)}) * t(i) * tb(j); });
    return Coeff::i() * body;
}

FormExpr glz_as_printed() {
    FormExpr body = sum12([](int i) {
        return f_d({bar(i)}) * conj(torsion_form(i)) + f_d({idx(i)}) * torsion_form(i);
    });
    body += sum12x2([](int i, int j) { return f_d({idx(i), bar(j)}) * t(i) * tb(j); });
    return body;
}

VerificationResult verify_startab(const Mutations&) {
    Trace tr("ID-STARTAB");
    FormExpr residual;
    int checked = 0;
    for (const auto& b : basis_words()) {
        for (const auto& c : basis_words()) {
            FormExpr delta = b == c ? FormExpr::constant(1) : FormExpr();
            FormExpr diff = hermitian_pairing(from_word(b), from_word(c)) - delta;
            if (b.size() == c.size()) {
                FormExpr vol = b == c ? volume_form() : FormExpr();
                diff += from_word(b) * conj(hodge_star(from_word(c))) - vol;
            }
            ++checked;
            if (!diff.is_zero() && residual.is_zero()) residual = diff;
        }
    }
    tr.step("paired " + std::to_string(checked) + " basis monomials against the volume form");
    return tr.finish(residual);
}

VerificationResult verify_starsq(const Mutations&) {
    Trace tr("ID-STARSQ");
    FormExpr residual;
    for (const auto& w : basis_words()) {
        FormExpr e = from_word(w);
        Coeff sign = w.size() % 2 ? Coeff(-1) : Coeff(1);
        FormExpr diff = hodge_star(hodge_star(e)) - sign * e;
        diff += conj(hodge_star(e)) - hodge_star(conj(e));
        if (!diff.is_zero() && residual.is_zero()) residual = diff;
    }
    tr.step("star twice and conj-star on all 16 basis monomials");
    return tr.finish(residual);
}

VerificationResult verify_glz(const Mutations&) {
    Trace tr("ID-GLZ");
    FormExpr got = ddc_f_reduced(tr);
    return tr.compare(got, glz_engine());
}

VerificationResult verify_lapform(const Mutations&) {
    Trace tr("ID-LAPFORM");
    FormExpr ddc = ddc_f_reduced(tr);
    FormExpr lap = laplace_trace(ddc);
    tr.step("2 w~ ^ dd^c f / w~^2");
    return tr.compare(lap, sum12([](int i) { return f_d({idx(i), bar(i)}); }));
}

VerificationResult verify_null(const Mutations&) {
    Trace tr("ID-NULL");
    FormExpr residual;
    for (int i = 1; i <= 2; ++i) {
        FormExpr expected = sum12([i](int j) {
            return al(j) * curvature_form(j, i) + al(i, {idx(j)}) * torsion_form(j) +
                   al(i, {bar(j)}) * conj(torsion_form(j));
        });
        expected += sum12x2([i](int j, int p) {
            return al(i, {idx(j), idx(p)}) * t(p) * t(j) + al(i, {idx(j), bar(p)}) * tb(p) * t(j) +
                   al(i, {bar(j), idx(p)}) * t(p) * tb(j) + al(i, {bar(j), bar(p)}) * tb(p) * tb(j);
        });
        residual += null_form(i) - expected;
    }
    tr.step("dd alpha_i with connection forms, then evaluated at the point");
    return tr.finish(residual);
}

VerificationResult verify_comm1(const Mutations&) {
    Trace tr("ID-COMM1");
    tr.relation("ID-NULL");
    tr.step("(1,1)-part of dd alpha_i solved for alpha_{i,k~l}");
    FormExpr residual;
    const auto& rules = commutation_rules();
    for (int i = 1; i <= 2; ++i) {
        for (int k = 1; k <= 2; ++k) {
            for (int l = 1; l <= 2; ++l) {
                FormExpr solved = *rules.comm1.apply(make_symbol("alpha", {}, {idx(i)}, {idx(k), bar(l)}));
                FormExpr stated = al(i, {bar(l), idx(k)}) + sum12([&](int j) { return al(j) * rcurv(j, i, k, l); });
                residual += solved - stated;
            }
        }
    }
    return tr.finish(residual);
}

VerificationResult verify_comm2(const Mutations&) {
    Trace tr("ID-COMM2");
    tr.relation("ID-NULL");
    tr.step("(0,2)-part of dd alpha_i solved for alpha_{i,~2~1}");
    FormExpr residual;
    for (int i = 1; i <= 2; ++i) {
        for (int k = 1; k <= 2; ++k) {
            for (int l = 1; l <= 2; ++l) {
                FormExpr lhs = al(i, {bar(l), bar(k)});
                FormExpr rhs = al(i, {bar(k), bar(l)}) - Coeff(2) * sum12([&](int j) {
                                   return al(j) * kbar(j, i, k, l) + al(i, {idx(j)}) * nij(j, k, l);
                               });
                residual += rewrite(lhs - rhs, {commutation_rules().comm2});
            }
        }
    }
    return tr.finish(residual);
}

VerificationResult verify_lapl(const Mutations&) {
    Trace tr("ID-LAPL");
    FormExpr u = sum12([](int i) { return al(i) * conj(al(i)); });
    FormExpr del = type_part(dp(u), 1, 0);
    tr.step("del |alpha|^2");
    FormExpr ddc = -Coeff::i() * dp(del);
    tr.step("dd^c |alpha|^2 = -i d del |alpha|^2");
    FormExpr lap = laplace_trace(ddc);
    tr.step("trace against w~");
    return tr.compare(lap, lap_alpha_expected());
}

VerificationResult verify_laplcomm(const Mutations&) {
    Trace tr("ID-LAPLCOMM");
    tr.relation("ID-LAPL");
    FormExpr e = apply_logged(tr, "ID-COMM1", lap_alpha_expected(), {commutation_rules().comm1}, false);
    std::map<Symbol, FormExpr> ax;
    for (int j = 1; j <= 2; ++j) {
        for (int i = 1; i <= 2; ++i) {
            FormExpr rhs = sym("Ric", {}, {idx(i), bar(j)}) - rcurv(j, i, 1, 1);
            rhs -= Coeff(4) * sum12x2([&](int p, int q) {
                return nij(q, p, j) * conj(nij(p, q, i)) + nij(p, q, j) * conj(nij(i, p, q));
            });
            ax[make_symbol("R", {idx(j)}, {idx(i), idx(2), bar(2)})] = rhs;
        }
    }
    e = apply_logged(tr, "AX-COMM", e, {table_rule("AX-COMM", ax)}, true);
    FormExpr expected = sum12x2([](int i, int j) {
        return al(i, {idx(j)}) * conj(al(i, {idx(j)})) + al(i, {bar(j)}) * conj(al(i, {bar(j)})) +
               Coeff(2) * real_part(al(i, {bar(j), idx(j)}) * conj(al(i))) +
               sym("Ric", {}, {idx(i), bar(j)}) * al(j) * conj(al(i));
    });
    expected -= Coeff(4) * sum12x2([](int i, int j) {
        return al(j) * conj(al(i)) * sum12x2([&](int p, int q) {
                   return nij(q, p, j) * conj(nij(p, q, i)) + nij(p, q, j) * conj(nij(i, p, q));
               });
    });
    return tr.compare(e, expected);
}

}  // namespace scy::identities::detail
