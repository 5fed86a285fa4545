#include "scy/symbolic/derivation.hpp"
#include "scy/symbolic/form_expr.hpp"
#include "scy/symbolic/hodge.hpp"
#include "scy/symbolic/text_format.hpp"

#include <gtest/gtest.h>

using namespace scy::symbolic;

namespace {

FormExpr t(int i) { return FormExpr::theta(i); }
FormExpr tb(int i) { return FormExpr::theta_bar(i); }
FormExpr alpha(int i) { return sym("alpha", {}, {idx(i)}); }

FormExpr from_word(const Word& w) {
    FormExpr e = FormExpr::constant(1);
    for (Gen g : w) e = e * FormExpr::generator(g);
    return e;
}

}  // namespace

TEST(Wedge, RepeatedGeneratorVanishes) { EXPECT_TRUE((t(1) * t(1)).is_zero()); }

TEST(Wedge, TranspositionFlipsSign) { EXPECT_EQ(tb(1) * t(1), -(t(1) * tb(1))); }

TEST(Wedge, ExpandsOverIndices) {
    FormExpr a = sum12([](int i) { return alpha(i) * t(i); });
    FormExpr b = sum12([](int j) { return conj(alpha(j)) * tb(j); });
    FormExpr ab = a * b;
    EXPECT_EQ(ab.size(), 4u);
    FormExpr expected = sum12x2([](int i, int j) { return alpha(i) * conj(alpha(j)) * t(i) * tb(j); });
    EXPECT_EQ(ab, expected);
}

TEST(Wedge, GradedAnticommutative) {
    std::vector<FormExpr> samples = {t(1), alpha(2) * tb(2), t(1) * tb(2) + Coeff::i() * t(2) * tb(1),
                                     sym("N", {idx(1)}, {bar(1), bar(2)}) * tb(1) * tb(2) * t(2)};
    for (const auto& x : samples) {
        for (const auto& y : samples) {
            int s = (x.degree() * y.degree()) % 2 ? -1 : 1;
            EXPECT_TRUE((x * y - Coeff(s) * (y * x)).is_zero());
        }
    }
}

TEST(Wedge, DegreeAboveFourCollapses) {
    EXPECT_TRUE((t(1) * t(2) * tb(1) * tb(2) * FormExpr::conn(1, 1)).is_zero());
}

TEST(Conj, Generators) {
    EXPECT_EQ(conj(t(1)), tb(1));
    FormExpr omega_term = Coeff::i() * t(1) * tb(1);
    EXPECT_EQ(conj(omega_term), omega_term);
    EXPECT_EQ(conj(conj(alpha(1) * t(2))), alpha(1) * t(2));
}

TEST(Conj, MixedDerivative) {
    FormExpr e = sum12x2([](int i, int j) { return sym("alpha", {}, {idx(i)}, {bar(j)}) * tb(j) * t(i); });
    FormExpr expected =
        sum12x2([](int i, int j) { return conj(sym("alpha", {}, {idx(i)}, {bar(j)})) * t(j) * tb(i); });
    EXPECT_EQ(conj(e), expected);
}

TEST(NormalForm, Cancels) {
    EXPECT_TRUE((t(2) * t(1) + t(1) * t(2)).is_zero());
    EXPECT_TRUE((Coeff(2) * t(1) * tb(1) + Coeff(-2) * t(1) * tb(1)).is_zero());
    // ~t2 ^ t1 ^ ~t1: two transpositions to t1 ^ ~t1 ^ ~t2
    EXPECT_EQ(tb(2) * t(1) * tb(1), t(1) * tb(1) * tb(2));
}

TEST(NormalForm, Idempotent) {
    FormExpr e = alpha(1) * t(2) * t(1) + sym("N", {idx(2)}, {bar(2), bar(1)}) * tb(1);
    EXPECT_EQ(normal_form(e), e);
    EXPECT_EQ(normal_form(normal_form(e)), normal_form(e));
}

TEST(Symmetries, Antisymmetry) {
    EXPECT_TRUE(sym("N", {idx(1)}, {bar(1), bar(1)}).is_zero());
    EXPECT_EQ(sym("N", {idx(2)}, {bar(2), bar(1)}), -sym("N", {idx(2)}, {bar(1), bar(2)}));
    EXPECT_TRUE(sym("Kb", {idx(2)}, {idx(1), bar(2), bar(2)}).is_zero());
}

TEST(TypePart, OfDAlpha) {
    FormExpr a = sum12([](int i) { return alpha(i) * t(i); });
    FormExpr da = at_point(ext_d(a));
    FormExpr p11 = type_part(da, 1, 1);
    FormExpr expected11 = sum12x2([](int i, int j) { return sym("alpha", {}, {idx(i)}, {bar(j)}) * tb(j) * t(i); });
    EXPECT_EQ(p11, expected11);
    FormExpr p02 = type_part(da, 0, 2);
    FormExpr expected02 = sum12([](int i) { return alpha(i) * torsion_form(i); });
    EXPECT_EQ(p02, expected02);
    EXPECT_EQ(type_part(sym("f"), 0, 0), sym("f"));
    EXPECT_EQ(type_part(da, 2, 0) + p11 + p02, da);
    EXPECT_THROW(type_part(ext_d(t(1)), 0, 2), std::invalid_argument);
}

TEST(ExtD, Scalar) {
    FormExpr expected = sum12([](int i) { return sym("f", {}, {}, {idx(i)}) * t(i) + sym("f", {}, {}, {bar(i)}) * tb(i); });
    EXPECT_EQ(ext_d(sym("f")), expected);
}

TEST(ExtD, TorsionAtPoint) {
    for (int i = 1; i <= 2; ++i) {
        FormExpr d = ext_d(t(i));
        EXPECT_TRUE(d.has_connection());
        FormExpr expected = sum12x2([i](int j, int k) { return sym("N", {idx(i)}, {bar(j), bar(k)}) * tb(j) * tb(k); });
        EXPECT_EQ(at_point(d), expected);
    }
}

TEST(ExtD, AtPointKillsConnection) {
    EXPECT_TRUE(at_point(FormExpr::conn(1, 2) * t(1)).is_zero());
    FormExpr e = alpha(1) * t(1) * tb(2);
    EXPECT_EQ(at_point(e), e);
}

TEST(ExtD, UnknownFamilyRejected) {
    EXPECT_THROW(ext_d(sym("lambda", {}, {idx(1)})), std::invalid_argument);
}

TEST(ExtD, OrderIndependent) {
    FormExpr x = alpha(1) * sym("f");
    FormExpr y = sym("f") * alpha(1);
    EXPECT_EQ(at_point(ext_d(x)), at_point(ext_d(y)));
    EXPECT_EQ(at_point(ext_d(x)), at_point(ext_d(alpha(1)) * sym("f") + alpha(1) * ext_d(sym("f"))));
}

TEST(ExtD, BidegreeShiftOfOneForm) {
    FormExpr d = at_point(ext_d(alpha(1) * t(1)));
    for (const auto& [k, c] : d.terms()) {
        int p = 0;
        for (Gen g : k.word) p += is_barred_frame(g) ? 0 : 1;
        EXPECT_EQ(k.word.size(), 2u);
        EXPECT_LE(p, 2);
    }
    EXPECT_FALSE(type_part(d, 0, 2).is_zero());
}

TEST(Hodge, TableRows) {
    EXPECT_EQ(hodge_star(t(1)), t(1) * t(2) * tb(2));
    EXPECT_EQ(hodge_star(t(1) * tb(1)), t(2) * tb(2));
    EXPECT_EQ(hodge_star(hodge_star(t(1))), -t(1));
    EXPECT_THROW(hodge_star(FormExpr::conn(1, 1)), std::invalid_argument);
}

TEST(Hodge, PairingIsOrthonormal) {
    auto basis = basis_words();
    ASSERT_EQ(basis.size(), 16u);
    for (const auto& b : basis) {
        for (const auto& c : basis) {
            FormExpr delta = b == c ? FormExpr::constant(1) : FormExpr();
            EXPECT_EQ(hermitian_pairing(from_word(b), from_word(c)), delta);
            if (b.size() == c.size()) {
                FormExpr lhs = from_word(b) * conj(hodge_star(from_word(c)));
                EXPECT_EQ(lhs, b == c ? volume_form() : FormExpr()) << from_word(b) << " | " << from_word(c);
            }
        }
    }
}

TEST(Hodge, StarSquaredAndReal) {
    for (const auto& w : basis_words()) {
        FormExpr e = from_word(w);
        Coeff s = w.size() % 2 ? Coeff(-1) : Coeff(1);
        EXPECT_EQ(hodge_star(hodge_star(e)), s * e) << to_text(e);
        EXPECT_EQ(conj(hodge_star(e)), hodge_star(conj(e))) << to_text(e);
    }
}

TEST(Hodge, VolumeAgainstKahlerForm) {
    FormExpr w2 = kahler_form() * kahler_form();
    EXPECT_EQ(w2, Coeff(2) * volume_form());
}

TEST(TextFormat, RoundTrip) {
    std::vector<FormExpr> samples = {
        FormExpr(),
        FormExpr::constant(Coeff::frac(-3, 2)),
        Coeff::i() * alpha(1) * t(2) * tb(1),
        sym("N", {idx(1)}, {bar(1), bar(2)}, {idx(2), bar(1)}) * conj(alpha(2)) + sym_pow("lambda", {idx(1)}, -1),
        at_point(ext_d(ext_d(alpha(1) * t(1)))),
        ext_d(t(2)),
    };
    for (const auto& e : samples) {
        EXPECT_EQ(parse_expr(to_text(e)), e) << to_text(e);
        EXPECT_EQ(parse_expr(to_text_multiline(e)), e);
    }
    EXPECT_THROW(parse_expr("1 * bogus"), std::invalid_argument);
    EXPECT_THROW(parse_expr("1 ^ q9"), std::invalid_argument);
}
