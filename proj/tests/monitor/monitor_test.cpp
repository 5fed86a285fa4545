#include "scy/monitor/estimate_monitor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace scy;
using namespace scy::monitor;
using solver::cd;
using solver::Herm;
using torus::Family;
using torus::make_background;
using torus::make_grid;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField sample(const torus::Grid& g, auto fn) {
    ScalarField f(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        double x[4] = {0, 0, 0, 0};
        for (int mu = 0; mu < g.real_dim(); ++mu) x[mu] = g.coordinate(p, mu);
        f[p] = fn(x);
    }
    return f;
}

// A potential whose Hessian mixes both complex directions, so g~ is not diagonal.
ScalarField mixing_potential(const torus::Grid& g, double A) {
    return sample(g, [A](const double* x) {
        return A / (2 * kPi * kPi) *
               (std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[2]) + 0.5 * std::cos(2 * kPi * (x[1] + x[3])) +
                0.3 * std::sin(2 * kPi * (x[0] - x[1] + x[3])));
    });
}

double sup_diff(const ScalarField& a, const ScalarField& b) { return (a - b).sup_abs(); }

}  // namespace

TEST(Diagnostics, FlatBackground) {
    auto bg = make_background(make_grid(2, 8), Family{});
    ScalarField phi(bg.grid);
    auto d = compute_diagnostics(solver::metric_from_potential(phi), solver::potential_to_one_form(phi), bg);
    for (std::size_t p = 0; p < d.tr_g_gt.size(); ++p) {
        EXPECT_EQ(d.tr_g_gt[p], 2.0);
        EXPECT_EQ(d.tr_gt_g[p], 2.0);
        EXPECT_EQ(d.lambda1[p], 1.0);
        EXPECT_EQ(d.lambda2[p], 1.0);
        EXPECT_EQ(d.a2[p], 0.0);
        EXPECT_EQ(d.mixed[p], 0.0);
    }
    EXPECT_EQ(cauchy_schwarz_check(d), 0.0);
}

TEST(Diagnostics, RejectsIndefiniteMetric) {
    auto g = make_grid(1, 8);
    auto bg = make_background(g, Family{});
    ScalarField phi = sample(g, [](const double* x) { return 0.2 * std::cos(2 * kPi * x[0]); });
    EXPECT_THROW(compute_diagnostics(solver::metric_from_potential(phi), solver::potential_to_one_form(phi), bg),
                 std::domain_error);
}

TEST(MixedNorm, OneDimensionalClosedForm) {
    auto g = make_grid(1, 32);
    auto bg = make_background(g, Family{});
    ScalarField phi = sample(g, [](const double* x) {
        return 0.03 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]) + 0.01 * std::cos(4 * kPi * x[1]);
    });
    auto m = solver::metric_from_potential(phi);
    // |grad g~|^2 = |d_z g~|^2 / g~^2 for a 1x1 metric
    ScalarField dz = torus::spectral_partial(solver::engine(g), m.h[0], 1, false);
    ScalarField expect(g);
    for (std::size_t p = 0; p < g.size(); ++p) expect[p] = std::norm(dz[p]) / std::norm(m.h[0][p]);
    EXPECT_LE(sup_diff(mixed_gradient_norm(m, bg), expect), 1e-8);
}

TEST(MixedNorm, FrameAndContractedRoutesAgree) {
    auto g = make_grid(2, 12);
    auto bg = make_background(g, Family{});
    auto m = solver::metric_from_potential(mixing_potential(g, 0.4));
    ScalarField frame = mixed_gradient_norm(m, bg);
    ScalarField contracted = mixed_gradient_norm_contracted(m);
    EXPECT_GT(frame.max_real(), 1.0);
    EXPECT_LE(sup_diff(frame, contracted), 1e-9);
}

TEST(MixedNorm, GaugeIndependence) {
    auto g = make_grid(2, 12);
    auto bg = make_background(g, Family{});
    auto m = solver::metric_from_potential(mixing_potential(g, 0.4));
    ScalarField eig = mixed_gradient_norm(m, bg, FrameGauge::eigen);
    EXPECT_LE(sup_diff(eig, mixed_gradient_norm(m, bg, FrameGauge::symmetric)), 1e-9);
    EXPECT_LE(sup_diff(eig, mixed_gradient_norm(m, bg, FrameGauge::rotated)), 1e-9);
}

TEST(MixedNorm, ZeroForFlatMetric) {
    auto g = make_grid(2, 8);
    auto bg = make_background(g, Family{});
    EXPECT_EQ(mixed_gradient_norm(solver::metric_from_potential(ScalarField(g)), bg).sup_abs(), 0.0);
}

TEST(CauchySchwarz, HoldsOnGenericKahlerMetric) {
    auto g = make_grid(2, 12);
    auto bg = make_background(g, Family{});
    ScalarField phi = mixing_potential(g, 0.4);
    auto d = compute_diagnostics(solver::metric_from_potential(phi), solver::potential_to_one_form(phi), bg);
    const double margin = cauchy_schwarz_check(d);
    EXPECT_GE(margin, -1e-8);
    // the inequality is strict somewhere for a genuinely two-dimensional metric
    double best = 0.0;
    for (std::size_t p = 0; p < d.mixed.size(); ++p) best = std::max(best, d.mixed[p] - d.grad_tr2[p] / d.tr_g_gt[p]);
    EXPECT_GT(best, 1e-3);
}

TEST(Da11, DiagonalSyntheticMetric) {
    Herm h = Herm::Zero(2, 2);
    h(0, 0) = 2.0;
    h(1, 1) = 0.5;
    Herm B = h - Herm::Identity(2, 2);
    EXPECT_DOUBLE_EQ(da11_rhs(h), 1.25);
    EXPECT_DOUBLE_EQ(hermitian_norm2(h, B), 1.25);
}

TEST(Da11, FlatAndSolved) {
    auto flat = make_background(make_grid(2, 8), Family{});
    ScalarField zero(flat.grid);
    EXPECT_EQ(da11_identity_check(solver::metric_from_potential(zero), solver::potential_to_one_form(zero), flat), 0.0);

    auto bg = make_background(make_grid(2, 16), Family{Family::Kind::single_mode, 0.5});
    auto r = solver::newton_solve(bg);
    ASSERT_TRUE(r.converged);
    const auto& phi = r.potential.phi;
    EXPECT_LE(da11_identity_check(solver::metric_from_potential(phi), solver::potential_to_one_form(phi), bg), 1e-9);
}

TEST(LaplacianIdentity, ConstantSineAndGeneric) {
    auto g = make_grid(2, 12);
    auto bg = make_background(g, Family{});
    auto flat = solver::metric_from_potential(ScalarField(g));
    EXPECT_LE(laplacian_identity_check(ScalarField(g, 2.5), flat, bg), 1e-14);
    EXPECT_LE(laplacian_identity_check(sample(g, [](const double* x) { return std::sin(2 * kPi * x[0]); }), flat, bg),
              1e-10);
    auto m = solver::metric_from_potential(mixing_potential(g, 0.4));
    ScalarField f = torus::sample_family(g, Family{Family::Kind::random_band, 1.0, 2, 17});
    EXPECT_LE(laplacian_identity_check(f, m, bg), 1e-9);
}

TEST(LaplacianIdentity, OneDimension) {
    auto g = make_grid(1, 16);
    auto bg = make_background(g, Family{});
    ScalarField phi = sample(g, [](const double* x) { return 0.02 * std::cos(2 * kPi * (x[0] + x[1])); });
    ScalarField f = sample(g, [](const double* x) { return std::sin(2 * kPi * x[1]); });
    EXPECT_LE(laplacian_identity_check(f, solver::metric_from_potential(phi), bg), 1e-10);
}

TEST(Report, ZeroAmplitudeRatioIsTwo) {
    auto rows = sweep(Family::Kind::single_mode, {0.0}, 2, 8, 0, {});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].ratio, 2.0);
    EXPECT_EQ(rows[0].max_a2, 0.0);
    EXPECT_FALSE(rows[0].flagged);
}

TEST(Report, CsvHeaderOrder) {
    EXPECT_EQ(csv_header(),
              "family,amplitude,N,seed,max_tr,max_a2,ratio,res_det,res_2d,res_gauge,res_ortho,res_da11,res_lapz,"
              "ein1_margin,newton_iters,flagged");
}

TEST(Report, SweepIsDeterministicAndClean) {
    auto a = sweep(Family::Kind::single_mode, {0.25, 0.5}, 2, 16, 3, {});
    auto b = sweep(Family::Kind::single_mode, {0.25, 0.5}, 2, 16, 3, {});
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_EQ(to_json(a[1]).dump(), to_json(b[1]).dump());
    for (const auto& r : a) {
        EXPECT_FALSE(r.flagged) << csv_row(r);
        EXPECT_GT(r.ratio, 0.0);
        EXPECT_LE(r.res.cy, solver::SolverConfig{}.tol);
        EXPECT_LE(r.res.a2_cross, 1e-15);
    }
}

TEST(Report, NonConvergenceIsFlaggedNotDropped) {
    solver::SolverConfig cfg;
    cfg.max_newton = 1;
    cfg.tol = 1e-14;
    auto rows = sweep(Family::Kind::random_band, {0.5}, 2, 8, 4, cfg);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].flagged);
    EXPECT_FALSE(rows[0].converged);
    EXPECT_NE(csv_row(rows[0]).find(",true"), std::string::npos);
}
