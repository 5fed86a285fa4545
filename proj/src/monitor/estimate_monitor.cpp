#include "scy/monitor/estimate_monitor.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace scy::monitor {

using solver::cd;
using solver::Herm;
using torus::DiffOp;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(const MetricField& m) {
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        if (!(solver::min_eigenvalue(m.at(p)) > 0.0)) {
            throw std::domain_error(fmt::format("metric not positive definite at grid point {}", p));
        }
    }
}

Herm conj_of(const Herm& h) { return h.conjugate(); }

// Smooth unitary field used to move away from the eigen gauge, with its real
// derivative along `axis`.
void rotation(const torus::Grid& g, std::size_t p, int axis, Herm& R, Herm& dR) {
    const int rd = g.real_dim();
    auto x = [&](int mu) { return g.coordinate(p, mu); };
    const double chi = 0.4 * std::sin(kTwoPi * x(0)) + 0.3 * std::cos(kTwoPi * x(rd - 1));
    const double psi = 0.7 * std::cos(kTwoPi * x(1)) + 0.2 * std::sin(kTwoPi * x(0));
    double dchi = 0.0, dpsi = 0.0;
    if (axis == 0) dchi += 0.4 * kTwoPi * std::cos(kTwoPi * x(0));
    if (axis == rd - 1) dchi -= 0.3 * kTwoPi * std::sin(kTwoPi * x(rd - 1));
    if (axis == 1) dpsi -= 0.7 * kTwoPi * std::sin(kTwoPi * x(1));
    if (axis == 0) dpsi += 0.2 * kTwoPi * std::cos(kTwoPi * x(0));
    const cd e = std::polar(1.0, psi);
    const cd ie = cd(0.0, 1.0) * e;
    if (g.complex_dim == 1) {
        R = Herm::Constant(1, 1, e);
        dR = Herm::Constant(1, 1, dpsi * ie);
        return;
    }
    const double c = std::cos(chi), s = std::sin(chi);
    R.resize(2, 2);
    dR.resize(2, 2);
    R << c * e, -s, s * e, c;
    dR << dchi * (-s) * e + dpsi * c * ie, -dchi * c, dchi * c * e + dpsi * s * ie, -dchi * s;
}

}  // namespace

double hermitian_norm2(const Herm& h, const Herm& B) {
    const Herm inv = h.inverse();
    const int n = static_cast<int>(h.rows());
    cd s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += inv(k, i) * inv(j, l) * B(i, j) * std::conj(B(k, l));
    return s.real();
}

double da11_rhs(const Herm& h) {
    const auto e = solver::hermitian_eigen(h);
    double tr_inv = 0.0, g2 = 0.0;
    for (int i = 0; i < e.values.size(); ++i) {
        tr_inv += 1.0 / e.values(i);
        g2 += 1.0 / (e.values(i) * e.values(i));
    }
    return static_cast<double>(h.rows()) - 2.0 * tr_inv + g2;
}

ScalarField mixed_gradient_norm(const MetricField& m, const BackgroundGeometry&, FrameGauge gauge) {
    require_positive(m);
    const int n = m.dim();
    const int rd = 2 * n;
    torus::Spectral& sp = solver::engine(m.grid);
    // real derivatives of every component of g~
    std::vector<std::vector<ScalarField>> dh(rd);
    for (int mu = 0; mu < rd; ++mu)
        for (const auto& c : m.h) dh[mu].push_back(sp.apply(DiffOp::real_axis(mu), c));

    ScalarField out(m.grid);
    Herm dH(n, n);
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        // coframe a with a^dagger a = conj(g~), so that g~ = sum_l theta~^l (x) conj(theta~^l)
        const Herm H = conj_of(m.at(p));
        const auto eig = solver::hermitian_eigen(H);
        const Herm& V = eig.vectors;
        Herm sq = Herm::Zero(n, n), isq = Herm::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            sq(i, i) = std::sqrt(eig.values(i));
            isq(i, i) = 1.0 / sq(i, i).real();
        }
        Herm a = sq * V.adjoint();
        Herm b = V * isq;
        const bool split = n == 1 || std::abs(eig.values(0) - eig.values(n - 1)) >
                                         1e-8 * (eig.values(0) + eig.values(n - 1));

        std::vector<Herm> P(rd);
        for (int mu = 0; mu < rd; ++mu) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) dH(i, j) = std::conj(dh[mu][i * n + j][p]);
            const Herm X = V.adjoint() * dH * V;
            Herm da;
            if (gauge == FrameGauge::symmetric || !split) {
                da = 0.5 * isq * X * V.adjoint();
            } else {
                Herm C = Herm::Zero(n, n);
                Herm Ld = Herm::Zero(n, n);
                for (int i = 0; i < n; ++i) {
                    Ld(i, i) = X(i, i);
                    for (int j = 0; j < n; ++j)
                        if (i != j) C(i, j) = X(i, j) / (eig.values(j) - eig.values(i));
                }
                da = 0.5 * isq * Ld * V.adjoint() - sq * C * V.adjoint();
            }
            Herm bb = b;
            if (gauge == FrameGauge::rotated) {
                Herm R, dR;
                rotation(m.grid, p, mu, R, dR);
                da = dR * a + R * da;
                bb = b * R.adjoint();
            }
            P[mu] = da * bb + bb.adjoint() * da.adjoint();
        }
        if (gauge == FrameGauge::rotated) {
            Herm R, dR;
            rotation(m.grid, p, 0, R, dR);
            a = R * a;
            b = b * R.adjoint();
        }
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
            Herm A = Herm::Zero(n, n);
            for (int q = 0; q < n; ++q) A += 0.5 * (P[2 * q] - cd(0.0, 1.0) * P[2 * q + 1]) * b(q, l);
            s += (A * a).squaredNorm();
        }
        out[p] = s;
    }
    return out;
}

ScalarField mixed_gradient_norm_contracted(const MetricField& m) {
    require_positive(m);
    const int n = m.dim();
    torus::Spectral& sp = solver::engine(m.grid);
    // D[(q * n + k) * n + l] = d_q g~_{k~l}
    std::vector<ScalarField> D;
    for (int q = 1; q <= n; ++q)
        for (const auto& c : m.h) D.push_back(torus::spectral_partial(sp, c, q, false));
    auto d = [&](int q, int k, int l, std::size_t p) { return D[(q * n + k) * n + l][p]; };

    ScalarField out(m.grid);
    for (std::size_t pt = 0; pt < m.grid.size(); ++pt) {
        const Herm inv = m.at(pt).inverse();
        cd s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                    for (int mm = 0; mm < n; ++mm)
                        for (int k = 0; k < n; ++k)
                            s += inv(q, p) * inv(mm, r) * d(p, k, mm, pt) * std::conj(d(q, k, r, pt));
        out[pt] = s.real();
    }
    return out;
}

ScalarField trace_gradient_norm(const MetricField& m) {
    const int n = m.dim();
    torus::Spectral& sp = solver::engine(m.grid);
    ScalarField tr(m.grid);
    for (int k = 0; k < n; ++k) tr = tr + m.h[k * n + k];
    std::vector<ScalarField> dt;
    for (int q = 1; q <= n; ++q) dt.push_back(torus::spectral_partial(sp, tr, q, false));
    ScalarField out(m.grid);
    for (std::size_t pt = 0; pt < m.grid.size(); ++pt) {
        const Herm inv = m.at(pt).inverse();
        cd s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) s += inv(q, p) * dt[p][pt] * std::conj(dt[q][pt]);
        out[pt] = s.real();
    }
    return out;
}

PointwiseDiagnostics compute_diagnostics(const MetricField& m, const OneFormField& a, const BackgroundGeometry& bg) {
    require_positive(m);
    const int n = m.dim();
    const std::size_t size = m.grid.size();
    PointwiseDiagnostics d;
    d.grid = m.grid;
    for (auto* v : {&d.tr_g_gt, &d.tr_gt_g, &d.emF_tr, &d.emF_tr_adj, &d.lambda1, &d.lambda2, &d.det, &d.a2,
                    &d.alpha2, &d.mixed, &d.grad_tr2, &d.da11_sq, &d.g_norm2})
        v->resize(size);

    const ScalarField mixed = mixed_gradient_norm(m, bg);
    const ScalarField grad = trace_gradient_norm(m);
    const auto B = solver::da11_components(a);
    const auto comps = solver::real_components(a);

    for (std::size_t p = 0; p < size; ++p) {
        const Herm h = m.at(p);
        const auto eig = solver::hermitian_eigen(h);
        const double emF = std::exp(-bg.F[p].real());
        double tr_inv = 0.0, g2 = 0.0, prod = 1.0;
        for (int i = 0; i < n; ++i) {
            tr_inv += 1.0 / eig.values(i);
            g2 += 1.0 / (eig.values(i) * eig.values(i));
            prod *= eig.values(i);
        }
        d.tr_g_gt[p] = h.trace().real();
        d.tr_gt_g[p] = tr_inv;
        d.emF_tr[p] = emF * d.tr_g_gt[p];
        d.emF_tr_adj[p] = emF * solver::adjugate(h).trace().real();
        d.lambda1[p] = eig.values(0);
        d.lambda2[p] = eig.values(n - 1);
        d.det[p] = prod;
        d.g_norm2[p] = g2;

        const Eigen::MatrixXd G = solver::real_metric(h);
        Eigen::VectorXd av(2 * n);
        for (int mu = 0; mu < 2 * n; ++mu) av(mu) = comps[mu][p].real();
        d.a2[p] = av.dot(G.ldlt().solve(av));

        const Herm inv = h.inverse();
        cd s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += inv(j, i) * a.alpha[i][p] * std::conj(a.alpha[j][p]);
        d.alpha2[p] = s.real();

        Herm Bp(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Bp(i, j) = B[i * n + j][p];
        d.da11_sq[p] = hermitian_norm2(h, Bp);
        d.mixed[p] = mixed[p].real();
        d.grad_tr2[p] = grad[p].real();
    }
    return d;
}

double cauchy_schwarz_check(const PointwiseDiagnostics& d) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < d.mixed.size(); ++p)
        worst = std::min(worst, d.mixed[p] - d.grad_tr2[p] / d.tr_g_gt[p]);
    return worst;
}

double da11_identity_check(const MetricField& m, const OneFormField& a, const BackgroundGeometry&) {
    require_positive(m);
    const int n = m.dim();
    const auto B = solver::da11_components(a);
    double worst = 0.0;
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        const Herm h = m.at(p);
        Herm Bp(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Bp(i, j) = B[i * n + j][p];
        worst = std::max(worst, std::abs(hermitian_norm2(h, Bp) - da11_rhs(h)));
    }
    return worst;
}

namespace {

// Real antisymmetric components W(mu, nu) of i K_{i~j} dz^i ^ dzbar^j.
Eigen::MatrixXd real_two_form(const Herm& K) {
    const int n = static_cast<int>(K.rows());
    auto e = [](int i, int mu) -> cd {
        if (mu / 2 != i) return 0.0;
        return mu % 2 == 0 ? cd(1.0) : cd(0.0, 1.0);
    };
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int mu = 0; mu < 2 * n; ++mu)
                for (int nu = 0; nu < 2 * n; ++nu) c(mu, nu) += cd(0.0, 1.0) * K(i, j) * e(i, mu) * std::conj(e(j, nu));
    return (c - c.transpose()).real();
}

// coefficient of dx^0 ^ dx^1 ^ dx^2 ^ dx^3 in A ^ B
double wedge4(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return A(0, 1) * B(2, 3) - A(0, 2) * B(1, 3) + A(0, 3) * B(1, 2) + A(1, 2) * B(0, 3) - A(1, 3) * B(0, 2) +
           A(2, 3) * B(0, 1);
}

}  // namespace

double laplacian_identity_check(const ScalarField& f, const MetricField& m, const BackgroundGeometry&) {
    require_positive(m);
    const int n = m.dim();
    const auto E = solver::complex_hessian(f);
    double worst = 0.0;
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        const Herm h = m.at(p);
        Herm Ep(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Ep(i, j) = E[i * n + j][p];
        const Herm inv = h.inverse();
        cd lhs = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) lhs += inv(j, i) * Ep(i, j);
        const Eigen::MatrixXd W = real_two_form(h);
        const Eigen::MatrixXd D = real_two_form(Ep);
        const double rhs = n == 1 ? D(0, 1) / W(0, 1) : 2.0 * wedge4(W, D) / wedge4(W, W);
        worst = std::max(worst, std::abs(lhs.real() - rhs));
    }
    return worst;
}

EstimateReport estimate_ratio(const PointwiseDiagnostics& d, const BackgroundGeometry& bg, const Residuals& res,
                              const solver::SolveResult& sol) {
    EstimateReport r;
    r.family = torus::family_name(bg.family.kind);
    r.amplitude = bg.family.amplitude;
    r.n = bg.grid.n;
    r.dim = bg.grid.complex_dim;
    r.seed = bg.family.seed;
    r.max_tr = *std::max_element(d.tr_g_gt.begin(), d.tr_g_gt.end());
    r.max_a2 = *std::max_element(d.a2.begin(), d.a2.end());
    r.ratio = r.max_tr / (1.0 + r.max_a2);
    r.res = res;
    r.ein1_margin = cauchy_schwarz_check(d);
    r.newton_iters = sol.iterations;
    r.converged = sol.converged;
    r.trace = solver::trace_json(sol);

    auto flag = [&](bool bad, const char* why) {
        if (bad) r.flags.emplace_back(why);
    };
    flag(!sol.converged, "newton did not converge");
    flag(!(res.det <= 1e-10), "res_det above 1e-10");
    flag(!(res.two_d <= 1e-10), "res_2d above 1e-10");
    flag(!(res.gauge <= 1e-8), "res_gauge above 1e-8");
    flag(!(res.ortho <= 1e-8 * res.a_norm + 1e-14), "res_ortho above 1e-8 |a|");
    flag(!(res.da11 <= 1e-9), "res_da11 above 1e-9");
    flag(!(res.lapz <= 1e-8), "res_lapz above 1e-8");
    flag(!(res.cy <= 1e-10), "lambda product off e^F by more than 1e-10");
    flag(!(res.a2_cross <= 1e-12 * (1.0 + r.max_a2)), "|a|^2 differs from 2|alpha|^2");
    flag(!(r.ein1_margin >= -1e-7), "ein1 margin below -1e-7");
    r.flagged = !r.flags.empty();
    return r;
}

EstimateReport evaluate(const BackgroundGeometry& bg, const solver::SolveResult& sol) {
    const ScalarField& phi = sol.potential.phi;
    const MetricField m = solver::metric_from_potential(phi);
    const OneFormField a = solver::potential_to_one_form(phi);
    PointwiseDiagnostics d;
    try {
        d = compute_diagnostics(m, a, bg);
    } catch (const std::domain_error& e) {
        EstimateReport r;
        r.family = torus::family_name(bg.family.kind);
        r.amplitude = bg.family.amplitude;
        r.n = bg.grid.n;
        r.dim = bg.grid.complex_dim;
        r.seed = bg.family.seed;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.max_tr = r.max_a2 = r.ratio = r.ein1_margin = nan;
        r.res = {nan, nan, nan, nan, nan, nan, nan, nan, nan};
        r.newton_iters = sol.iterations;
        r.converged = sol.converged;
        r.trace = solver::trace_json(sol);
        r.flags = {"newton did not converge", e.what()};
        r.flagged = true;
        return r;
    }

    Residuals res;
    for (std::size_t p = 0; p < d.det.size(); ++p) {
        const double eF = std::exp(bg.F[p].real());
        res.two_d = std::max(res.two_d, std::abs(d.tr_gt_g[p] - d.emF_tr_adj[p]));
        res.cy = std::max(res.cy, std::abs(d.det[p] - eF));
        res.a2_cross = std::max(res.a2_cross, std::abs(d.a2[p] - 2.0 * d.alpha2[p]));
        res.da11 = std::max(res.da11, std::abs(d.da11_sq[p] - (m.dim() - 2.0 * d.tr_gt_g[p] + d.g_norm2[p])));
    }
    const ScalarField ratio = solver::det_ratio(m);
    for (std::size_t p = 0; p < ratio.size(); ++p)
        res.det = std::max(res.det, std::abs(ratio[p].real() - std::exp(bg.F[p].real())));
    res.gauge = solver::gauge_residual(a, m);
    for (double v : solver::harmonic_orthogonality(a, m)) res.ortho = std::max(res.ortho, std::abs(v));
    res.a_norm = solver::l2_norm(a, m);
    res.lapz = solver::almost_kahler_check(phi, m);
    return estimate_ratio(d, bg, res, sol);
}

EstimateReport run_case(const BackgroundGeometry& bg, const solver::SolverConfig& cfg) {
    return evaluate(bg, solver::newton_solve(bg, cfg));
}

std::vector<EstimateReport> sweep(torus::Family::Kind family, const std::vector<double>& amplitudes, int dim, int n,
                                  std::uint64_t seed, const solver::SolverConfig& cfg, int modes) {
    cfg.validate();
    const torus::Grid g = torus::make_grid(dim, n);
    std::vector<EstimateReport> out;
    for (double amp : amplitudes) {
        torus::Family fam{family, amp, modes, seed};
        out.push_back(run_case(torus::make_background(g, fam), cfg));
    }
    return out;
}

namespace {

// Shortest round-trip text, keeping a decimal point on whole numbers.
std::string num(double v) {
    std::string s = fmt::format("{}", v);
    if (s.find_first_not_of("-0123456789") == std::string::npos) s += ".0";
    return s;
}

}  // namespace

std::string csv_header() {
    return "family,amplitude,N,seed,max_tr,max_a2,ratio,res_det,res_2d,res_gauge,res_ortho,res_da11,res_lapz,"
           "ein1_margin,newton_iters,flagged";
}

std::string csv_row(const EstimateReport& r) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", r.family, num(r.amplitude), r.n, r.seed,
                       num(r.max_tr), num(r.max_a2), num(r.ratio), num(r.res.det), num(r.res.two_d), num(r.res.gauge),
                       num(r.res.ortho), num(r.res.da11), num(r.res.lapz), num(r.ein1_margin), r.newton_iters,
                       r.flagged ? "true" : "false");
}

std::string to_csv(const std::vector<EstimateReport>& rows) {
    std::string s = csv_header() + "\n";
    for (const auto& r : rows) s += csv_row(r) + "\n";
    return s;
}

nlohmann::json to_json(const EstimateReport& r) {
    // non-finite values have no JSON literal; they become null
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    return {
        {"family", r.family},
        {"amplitude", num(r.amplitude)},
        {"N", r.n},
        {"dim", r.dim},
        {"seed", r.seed},
        {"max_tr", num(r.max_tr)},
        {"max_a2", num(r.max_a2)},
        {"ratio", num(r.ratio)},
        {"res_det", num(r.res.det)},
        {"res_2d", num(r.res.two_d)},
        {"res_gauge", num(r.res.gauge)},
        {"res_ortho", num(r.res.ortho)},
        {"res_da11", num(r.res.da11)},
        {"res_lapz", num(r.res.lapz)},
        {"res_cy", num(r.res.cy)},
        {"res_a2_cross", num(r.res.a2_cross)},
        {"a_l2_norm", num(r.res.a_norm)},
        {"ein1_margin", num(r.ein1_margin)},
        {"newton_iters", r.newton_iters},
        {"converged", r.converged},
        {"flagged", r.flagged},
        {"flags", r.flags},
        {"trace", r.trace},
    };
}

}  // namespace scy::monitor
