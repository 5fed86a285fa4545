#pragma once

#include "scy/solver/ma_solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace scy::monitor {

using solver::MetricField;
using solver::OneFormField;
using torus::BackgroundGeometry;
using torus::ScalarField;

/// Per-point quantities, each vector indexed by flat grid point.
struct PointwiseDiagnostics {
    torus::Grid grid;
    std::vector<double> tr_g_gt;      // tr_g g~
    std::vector<double> tr_gt_g;      // tr_g~ g
    std::vector<double> emF_tr;       // e^{-F} tr_g g~
    std::vector<double> emF_tr_adj;   // e^{-F} tr(adj g~), equal to tr_g~ g when det g~ = e^F
    std::vector<double> lambda1;      // largest eigenvalue of g~ relative to g
    std::vector<double> lambda2;      // smallest (equal to lambda1 in dimension 1)
    std::vector<double> det;          // product of eigenvalues
    std::vector<double> a2;           // |a|^2_g~ from the real metric
    std::vector<double> alpha2;       // |alpha|^2_g~ from the Hermitian metric
    std::vector<double> mixed;        // |grad g~|^2_{g,g~}
    std::vector<double> grad_tr2;     // |grad tr_g g~|^2_g~
    std::vector<double> da11_sq;      // |(da)^{(1,1)}|^2_g~
    std::vector<double> g_norm2;      // |g|^2_g~ = sum lambda_i^{-2}
};

/// g~^{i~k} g~^{l~j} B_{i~j} conj(B_{k~l}) at one point, for h = g~_{i~j}.
double hermitian_norm2(const solver::Herm& h, const solver::Herm& B);

/// n - 2 tr_g~ g + sum lambda_i^{-2} at one point.
double da11_rhs(const solver::Herm& h);

/// Throws std::domain_error when g~ is not positive definite somewhere.
PointwiseDiagnostics compute_diagnostics(const MetricField& m, const OneFormField& a, const BackgroundGeometry& bg);

/// How the g~-unitary frame is differentiated. The norm does not depend on it.
enum class FrameGauge { eigen, symmetric, rotated };

/// Mixed norm from a g~-unitary coframe built out of the eigen-decomposition of g~.
ScalarField mixed_gradient_norm(const MetricField& m, const BackgroundGeometry& bg, FrameGauge gauge = FrameGauge::eigen);

/// The same norm from the contraction g~^{p~q} g~^{r~m} g^{k~l} d_p g~_{k~m} d_~q g~_{r~l}.
ScalarField mixed_gradient_norm_contracted(const MetricField& m);

/// |grad tr_g g~|^2_g~ per point.
ScalarField trace_gradient_norm(const MetricField& m);

/// min over the grid of mixed - grad_tr2 / tr_g g~.
double cauchy_schwarz_check(const PointwiseDiagnostics& d);

/// sup |(da)^{(1,1)}|^2_g~ - (n - 2 tr_g~ g + |g|^2_g~)|.
double da11_identity_check(const MetricField& m, const OneFormField& a, const BackgroundGeometry& bg);

/// sup |g~^{i~j} f_{i~j} - n (omega~^{n-1} ^ dd^c f) / omega~^n|, the wedge taken
/// on real 2-form components.
double laplacian_identity_check(const ScalarField& f, const MetricField& m, const BackgroundGeometry& bg);

struct Residuals {
    double det = 0.0;       // sup |det g~ / det g - e^F|
    double two_d = 0.0;     // sup |tr_g~ g - e^{-F} tr(adj g~)|
    double gauge = 0.0;
    double ortho = 0.0;     // largest harmonic pairing
    double da11 = 0.0;
    double lapz = 0.0;
    double cy = 0.0;        // sup |lambda_1 lambda_2 - e^F|
    double a2_cross = 0.0;  // sup |a2 - 2 alpha2|
    double a_norm = 0.0;    // L2 norm of a, scale for ortho
};

struct EstimateReport {
    std::string family;
    double amplitude = 0.0;
    int n = 0;
    int dim = 2;
    std::uint64_t seed = 0;
    double max_tr = 0.0;
    double max_a2 = 0.0;
    double ratio = 0.0;
    Residuals res;
    double ein1_margin = 0.0;
    int newton_iters = 0;
    bool converged = false;
    bool flagged = false;
    std::vector<std::string> flags;
    nlohmann::json trace = nlohmann::json::array();
};

/// Builds the report from diagnostics and residuals and applies the flag rules.
EstimateReport estimate_ratio(const PointwiseDiagnostics& d, const BackgroundGeometry& bg, const Residuals& res,
                              const solver::SolveResult& sol);

/// Diagnostics, residuals and report for a finished solve.
EstimateReport evaluate(const BackgroundGeometry& bg, const solver::SolveResult& sol);

/// Solves and evaluates one case.
EstimateReport run_case(const BackgroundGeometry& bg, const solver::SolverConfig& cfg);

/// One run per amplitude, in the given order.
std::vector<EstimateReport> sweep(torus::Family::Kind family, const std::vector<double>& amplitudes, int dim, int n,
                                  std::uint64_t seed, const solver::SolverConfig& cfg, int modes = 2);

std::string csv_header();
std::string csv_row(const EstimateReport& r);
std::string to_csv(const std::vector<EstimateReport>& rows);
nlohmann::json to_json(const EstimateReport& r);

}  // namespace scy::monitor
