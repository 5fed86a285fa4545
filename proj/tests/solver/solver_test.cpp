#include "scy/solver/ma_solver.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace scy;
using namespace scy::solver;
using torus::Family;
using torus::make_background;
using torus::make_grid;

namespace {

constexpr double kPi = std::numbers::pi;

using oracle::analytic_metric;
using oracle::eval;
using oracle::manufactured_waves;
using oracle::sample;

const SolveResult& solved_t4() {
    static const SolveResult r = [] {
        auto bg = make_background(make_grid(2, 16), Family{Family::Kind::single_mode, 0.5});
        return newton_solve(bg);
    }();
    return r;
}

}  // namespace

TEST(Config, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.tol = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.margin = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Hessian, MatchesClosedForm) {
    auto g = make_grid(2, 12);
    auto ws = manufactured_waves(0.3);
    ScalarField phi = sample(g, [&](const double* x) { return eval(ws, x); });
    MetricField m = metric_from_potential(phi);
    double err = 0.0;
    for (std::size_t p = 0; p < g.size(); p += 7) {
        double x[4];
        for (int mu = 0; mu < 4; ++mu) x[mu] = g.coordinate(p, mu);
        err = std::max(err, (m.at(p) - analytic_metric(ws, x, 2)).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(err, 1e-12);
}

TEST(Residual, ZeroForcingZeroPotential) {
    auto bg = make_background(make_grid(2, 8), Family{});
    EXPECT_EQ(ma_residual(ScalarField(bg.grid), bg).sup_abs(), 0.0);
}

TEST(Residual, NonPositiveMetricIsRejected) {
    auto g = make_grid(1, 8);
    auto bg = make_background(g, Family{});
    ScalarField phi = sample(g, [](const double* x) { return 0.2 * std::cos(2 * kPi * x[0]); });
    try {
        ma_residual(phi, bg);
        FAIL() << "expected domain_error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("point"), std::string::npos);
    }
}

TEST(Linearization, MatchesCentralDifferences) {
    auto g = make_grid(2, 8);
    auto bg = make_background(g, Family{Family::Kind::single_mode, 0.4});
    auto ws = manufactured_waves(0.3);
    ScalarField phi = sample(g, [&](const double* x) { return eval(ws, x); });
    const double eps = 1e-5;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ScalarField v = torus::sample_family(g, Family{Family::Kind::random_band, 0.05, 2, seed});
        ScalarField lin = linearized_apply(phi, v);
        ScalarField fd = cd(0.5 / eps) * (ma_residual(phi + cd(eps) * v, bg) - ma_residual(phi - cd(eps) * v, bg));
        EXPECT_LE((lin - fd).sup_abs(), 1e-6 * lin.sup_abs()) << "seed " << seed;
    }
}

TEST(Newton, ZeroForcingNeedsNoIterations) {
    auto r = newton_solve(make_background(make_grid(2, 8), Family{}));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.potential.phi.sup_abs(), 0.0);
}

TEST(Newton, OneDimensionalFourierOracle) {
    // In dimension 1 the equation is linear: (1/4) phi'' = e^F - 1 in x^1.
    const int N = 64;
    auto g = make_grid(1, N);
    auto bg = make_background(g, Family{Family::Kind::single_mode, 0.5});
    auto r = newton_solve(bg);
    ASSERT_TRUE(r.converged) << r.message;
    EXPECT_LE(r.iterations, 3);

    std::vector<double> ef(N);
    for (int j = 0; j < N; ++j) ef[j] = std::exp(bg.F[static_cast<std::size_t>(j) * N].real());
    const std::vector<double> phi = oracle::fourier_solution_1d(ef);
    double scale = 0.0, err = 0.0;
    for (double v : phi) scale = std::max(scale, std::abs(v));
    for (std::size_t p = 0; p < g.size(); ++p) {
        const int j = static_cast<int>(p / N);
        err = std::max(err, std::abs(r.potential.phi[p].real() - phi[j]));
    }
    EXPECT_LE(err / scale, 1e-10);
}

TEST(Newton, ManufacturedSolution) {
    auto g = make_grid(2, 24);
    auto ws = manufactured_waves(0.3);
    ScalarField F0(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        double x[4];
        for (int mu = 0; mu < 4; ++mu) x[mu] = g.coordinate(p, mu);
        Herm h = analytic_metric(ws, x, 2);
        ASSERT_GT(min_eigenvalue(h), 0.0);
        F0[p] = std::log(det_real(h));
    }
    auto bg = make_background(g, F0);
    EXPECT_LE(std::abs(bg.shift), 1e-12);
    auto r = newton_solve(bg);
    ASSERT_TRUE(r.converged) << r.message;
    ScalarField diff = r.potential.phi - sample(g, [&](const double* x) { return eval(ws, x); });
    const cd c = diff.mean();
    EXPECT_LE((diff - ScalarField(g, c)).sup_abs(), 1e-8);
    for (std::size_t i = 2; i < r.trace.size(); ++i) EXPECT_LT(r.trace[i].residual_sup, r.trace[i - 1].residual_sup);
    EXPECT_DOUBLE_EQ(r.potential.phi.max_real(), 0.0);
}

TEST(OneForm, DcOfSine) {
    auto g = make_grid(1, 16);
    ScalarField phi = sample(g, [](const double* x) { return std::sin(2 * kPi * x[0]); });
    OneFormField a = potential_to_one_form(phi);
    ScalarField expect = sample(g, [](const double* x) { return cd(0.0, -kPi / 2 * std::cos(2 * kPi * x[0])); });
    EXPECT_LE((a.alpha[0] - expect).sup_abs(), 1e-12);
    auto comps = real_components(a);
    // a = d^c phi: a_x = 0, a_y = pi cos(2 pi x)
    EXPECT_LE(comps[0].sup_abs(), 1e-12);
    EXPECT_LE((comps[1] - sample(g, [](const double* x) { return kPi * std::cos(2 * kPi * x[0]); })).sup_abs(), 1e-12);
}

TEST(OneForm, Da11FromSampledAlphaMatchesHessian) {
    auto g = make_grid(2, 12);
    auto ws = manufactured_waves(0.3);
    ScalarField phi = sample(g, [&](const double* x) { return eval(ws, x); });
    OneFormField a = potential_to_one_form(phi);
    OneFormField sampled{a.grid, a.alpha, std::nullopt};
    auto hess = complex_hessian(phi);
    auto b1 = da11_components(a);
    auto b2 = da11_components(sampled);
    for (std::size_t k = 0; k < hess.size(); ++k) {
        EXPECT_LE((b1[k] - hess[k]).sup_abs(), 1e-14);
        EXPECT_LE((b2[k] - hess[k]).sup_abs(), 1e-12);
    }
}

TEST(RealMetric, FlatIsTwiceIdentity) {
    Eigen::MatrixXd G = real_metric(Herm::Identity(2, 2));
    EXPECT_LE((G - 2.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SolvedT4, GaugeOrthogonalityAndClass) {
    const auto& r = solved_t4();
    ASSERT_TRUE(r.converged);
    const ScalarField& phi = r.potential.phi;
    MetricField m = metric_from_potential(phi);
    OneFormField a = potential_to_one_form(phi);
    EXPECT_LE(gauge_residual(a, m), 1e-8);
    const double norm = l2_norm(a, m);
    EXPECT_GT(norm, 0.0);
    for (double v : harmonic_orthogonality(a, m)) EXPECT_LE(std::abs(v), 1e-8 * norm);
    EXPECT_NEAR(class_constant(m), 2.0, 1e-10);
    EXPECT_LE(almost_kahler_check(phi, m), 1e-8);
    EXPECT_LE(r.residual_sup, SolverConfig{}.tol);
}

TEST(SolvedT4, TraceJsonShape) {
    auto j = trace_json(solved_t4());
    EXPECT_EQ(j["converged"], true);
    ASSERT_TRUE(j["trace"].is_array());
    ASSERT_EQ(j["trace"].size(), solved_t4().trace.size());
    for (const char* key : {"residual_sup", "step_norm", "linesearch_backtracks", "min_eigenvalue", "krylov_iterations"})
        EXPECT_TRUE(j["trace"][0].contains(key)) << key;
}
