// Eigenframe reductions and the final algebraic assemblies.
#include "common.hpp"

namespace scy::identities::detail {

namespace {

FormExpr abg(int i, std::vector<Index> derivs = {}) { return sym("alphabg", {}, {idx(i)}, std::move(derivs)); }

FormExpr nbg(int i, int j, int k, std::vector<Index> derivs = {}) {
    return sym("Nbg", {idx(i)}, {bar(j), bar(k)}, std::move(derivs));
}

FormExpr lam(int i, int twice_power) { return sym_pow("lambda", {idx(i)}, twice_power); }
FormExpr ef(int twice_power) { return FormExpr::symbol(make_symbol("eF"), twice_power); }

FormExpr fa(int i, int j) { return sym("a", {idx(i)}, {idx(j)}); }
FormExpr fb(int i, int j) { return sym("b", {idx(i)}, {idx(j)}); }

// Covariant derivative of N in the tamed frame rewritten through the
// background frame and the Chern-difference coefficients aC.
RewriteRule ax_l44() {
    return RewriteRule{"AX-L44", [](const Symbol& s) -> std::optional<FormExpr> {
                           if (s.family != "N" || s.derivs.size() != 1 || s.derivs[0].barred) return std::nullopt;
                           int i = s.upper[0].value, j = s.lower[0].value, k = s.lower[1].value;
                           int p = s.derivs[0].value;
                           FormExpr out;
                           for (int l = 1; l <= 2; ++l)
                               for (int r = 1; r <= 2; ++r)
                                   for (int q = 1; q <= 2; ++q)
                                       for (int u = 1; u <= 2; ++u)
                                           out += nbg(l, r, q, {idx(u)}) * fa(i, l) * conj(fb(r, j)) *
                                                  conj(fb(q, k)) * fb(u, p);
                           for (int t_ = 1; t_ <= 2; ++t_)
                               for (int r = 1; r <= 2; ++r)
                                   for (int q = 1; q <= 2; ++q)
                                       for (int u = 1; u <= 2; ++u)
                                           out += nbg(t_, r, q) * conj(fb(r, j)) * conj(fb(q, k)) *
                                                  sym("aC", {idx(i)}, {idx(u), idx(p)}) * fa(u, t_);
                           return out;
                       }};
}

// Replaces A C1^{-1} by C0 + 1, the choice A = C1 (C0 + 1).
FormExpr choose_a(const FormExpr& e) {
    const Symbol a = make_symbol("A"), c1 = make_symbol("C1");
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        std::vector<Factor> rest;
        int pa = 0, pc = 0;
        for (const auto& f : k.factors) {
            if (f.symbol == a) {
                pa = f.twice_power;
            } else if (f.symbol == c1) {
                pc = f.twice_power;
            } else {
                rest.push_back(f);
            }
        }
        FormExpr mono;
        if (pa == 2 && pc == -2) {
            mono.add_term(c, rest, k.word);
            out += mono * (sym("C0") + FormExpr::constant(1));
        } else {
            mono.add_term(c, k.factors, k.word);
            out += mono;
        }
    }
    return out;
}

}  // namespace

VerificationResult verify_list(const Mutations& m) {
    Trace tr("ID-LIST");
    FormExpr term = Coeff(-4) * sum12x2([](int i, int j) {
                        return sum12x2([&](int p, int q) { return al(j) * conj(al(i)) * nij(p, q, j) * conj(nij(i, p, q)); });
                    });
    FormExpr bg = to_background(term);
    tr.step("frame change to the background coframe");
    FormExpr ev = substitute_eigenframe(bg, !m.list_volume_off);
    tr.step(m.list_volume_off ? "eigenframe substitution (lambda_1 lambda_2 rewrite disabled)"
                              : "eigenframe substitution and lambda_1 lambda_2 -> e^F");
    FormExpr expected = Coeff(-4) * ef(-2) * sum12x2([](int h, int k) {
                            return abg(1) * conj(abg(h)) * nbg(k, 2, 1) * conj(nbg(h, k, 2)) +
                                   abg(2) * conj(abg(h)) * nbg(k, 1, 2) * conj(nbg(h, k, 1));
                        });
    return tr.compare(ev, expected);
}

VerificationResult verify_lapterms(const Mutations&) {
    Trace tr("ID-LAPTERMS");
    auto reduce = [&](const FormExpr& e) { return substitute_eigenframe(to_background(e)); };
    auto off_diagonal = [](auto&& fn) {
        return sum12x2([&](int i, int k) { return i == k ? FormExpr() : fn(i, k); });
    };

    FormExpr e1 = sum12x2([](int i, int j) { return sum12([&](int k) { return al(i, {idx(j)}) * al(k) * nij(j, k, i); }); });
    FormExpr t1 = ef(-2) * sum12([&](int j) {
                      return off_diagonal([j](int i, int k) { return abg(i, {idx(j)}) * abg(k) * nbg(j, k, i); });
                  });
    FormExpr residual = reduce(e1) - t1;
    tr.step("alpha_{i,j} alpha_k N^j_{~k~i} in the eigenframe");

    FormExpr e2 = sum12x2([](int i, int j) { return sum12([&](int k) { return al(j) * al(k) * kbar(j, i, k, i); }); });
    FormExpr t2 = ef(-2) * sum12([&](int j) {
                      return off_diagonal([j](int i, int k) {
                          return abg(j) * abg(k) * sym("Kbbg", {idx(j)}, {idx(i), bar(k), bar(i)});
                      });
                  });
    residual += reduce(e2) - t2;
    tr.step("alpha_j alpha_k Kb^j_{i~k~i} in the eigenframe");

    FormExpr e3 = sum12x2([](int i, int j) { return sum12([&](int k) { return al(i) * al(k) * nij(i, j, k, {idx(j)}); }); });
    FormExpr l44 = apply_logged(tr, "AX-L44", e3, {ax_l44()}, true);
    FormExpr got3 = reduce(l44);
    FormExpr t3 = ef(-2) * sum12([&](int i) {
                      return off_diagonal([i](int j, int k) { return abg(i) * abg(k) * nbg(i, j, k, {idx(j)}); });
                  });
    t3 += ef(-1) * sum12x2([&](int i, int t_) {
              return off_diagonal([&](int j, int k) {
                  return lam(i, -1) * lam(k, -1) * abg(i) * abg(k) * nbg(t_, j, k) *
                         sym("aC", {idx(i)}, {idx(t_), idx(j)}) * lam(t_, 1);
              });
          });
    residual += got3 - volume_rewrite(t3);
    tr.step("alpha_i alpha_k N^i_{~j~k,j} in the eigenframe");
    return tr.finish(residual);
}

VerificationResult verify_vier_alg(const Mutations&) {
    Trace tr("ID-VIER-ALG");
    tr.relation("ID-LONGA");
    tr.relation("ID-DOLORE1");
    tr.relation("ID-DOLORE2");
    FormExpr d1 = Coeff(2) * sum12x2([](int k, int i) { return al(k, {bar(i), idx(i)}) * t(k); });
    FormExpr d2 = sum12([](int k) {
        return sum12x2([k](int i, int j) {
                   return Coeff(-4) * al(i, {idx(j)}) * nij(j, k, i) - Coeff(2) * al(j) * kbar(j, i, k, i) +
                          Coeff(2) * al(i) * nij(i, j, k, {idx(j)});
               }) *
               tb(k);
    });
    FormExpr lap = d1 + d2;
    FormExpr alpha = alpha_form();
    FormExpr lhs = Coeff::frac(1, 2) * bilinear_pairing(lap + conj(lap), alpha + conj(alpha));
    tr.step("1/2 g~(Delta a, a) from the two components of Delta alpha");
    FormExpr rhs = Coeff(2) * real_part(sum12x2([](int k, int i) { return al(k, {bar(i), idx(i)}) * conj(al(k)); }));
    rhs += real_part(sum12([](int k) {
        return sum12x2([k](int i, int j) {
            return Coeff(-4) * al(i, {idx(j)}) * al(k) * nij(j, k, i) - Coeff(2) * al(j) * al(k) * kbar(j, i, k, i) +
                   Coeff(2) * al(i) * al(k) * nij(i, j, k, {idx(j)});
        });
    }));
    return tr.compare(lhs, rhs);
}

VerificationResult verify_2d(const Mutations&) {
    Trace tr("ID-2D");
    FormExpr residual = volume_rewrite(lam(1, -2) + lam(2, -2) - ef(-2) * (lam(1, 2) + lam(2, 2)));
    tr.step("1/lambda_1 + 1/lambda_2 against e^{-F}(lambda_1 + lambda_2)");
    // adj(G) G = det(G) I for a Hermitian 2x2 matrix, so tr_G = tr(adj G) / det G
    FormExpr g11 = sym("G11"), g22 = sym("G22"), g12 = sym("G12");
    FormExpr g[2][2] = {{g11, g12}, {conj(g12), g22}};
    FormExpr adj[2][2] = {{g22, -g12}, {-conj(g12), g11}};
    FormExpr det = g11 * g22 - g12 * conj(g12);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            FormExpr entry = adj[i][0] * g[0][j] + adj[i][1] * g[1][j];
            residual += entry - (i == j ? det : FormExpr());
        }
    }
    residual += (adj[0][0] + adj[1][1]) - (g11 + g22);
    tr.step("adj(G) G = det(G) I and tr adj(G) = tr G");
    return tr.finish(residual);
}

VerificationResult verify_maxprin(const Mutations&) {
    Trace tr("ID-MAXPRIN");
    FormExpr tt = sym("trgg"), x = sym("gradg2"), a2 = sym("a2");
    FormExpr c = sym("C"), c0 = sym("C0"), a = sym("A");
    auto a_pow = [](int twice) { return FormExpr::symbol(make_symbol("A"), twice); };
    FormExpr c1inv = FormExpr::symbol(make_symbol("C1"), -2);
    // eps = 1/A in both inequalities
    FormExpr combo = x - c0 * tt * tt - c + a * c1inv * tt * tt - a_pow(-2) * a * x - c * a * a_pow(4) * a2 * a2 - c * a;
    tr.step("combine the two inequalities with eps = 1/A");
    FormExpr chosen = choose_a(combo);
    tr.step("A = C1 (C0 + 1)");
    FormExpr expected = tt * tt - c - c * a - c * a_pow(6) * a2 * a2;
    return tr.compare(chosen, expected);
}

}  // namespace scy::identities::detail
