#pragma once

#include "scy/solver/pointwise.hpp"
#include "scy/torus/torus_lab.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace scy::solver {

using torus::BackgroundGeometry;
using torus::Grid;
using torus::ScalarField;

struct SolverConfig {
    int max_newton = 30;
    double tol = 1e-11;          // sup-norm of the Monge-Ampere residual
    double krylov_tol = 1e-13;   // relative residual of each linear solve
    int krylov_max = 400;
    int krylov_restart = 80;
    double backtrack = 0.5;
    double margin = 0.1;  // trial min eigenvalue must stay above margin * current

    /// Throws std::invalid_argument on non-positive tolerances or margin outside (0,1).
    void validate() const;
};

/// Real potential with sup = 0.
struct PotentialField {
    ScalarField phi;
};

/// g~_{i~j} = h[i * dim + j] per grid point.
struct MetricField {
    Grid grid;
    std::vector<ScalarField> h;

    int dim() const { return grid.complex_dim; }
    Herm at(std::size_t p) const;
};

/// (1,0)-part alpha_i dz^i of a real 1-form a = alpha + conj(alpha).
struct OneFormField {
    Grid grid;
    std::vector<ScalarField> alpha;
    // Set when a = d^c phi. Sampled first derivatives cannot see the Nyquist
    // mode of phi, so da is then taken from phi with second-order symbols.
    std::optional<ScalarField> potential;
};

/// Shared FFT engine for the calling thread and grid.
torus::Spectral& engine(const Grid& g);

/// Hessian phi_{i~j} as n*n complex fields.
std::vector<ScalarField> complex_hessian(const ScalarField& phi);

/// g + Hess(phi). Does not check positivity.
MetricField metric_from_potential(const ScalarField& phi);

/// det(g~)/det(g) per point.
ScalarField det_ratio(const MetricField& m);

/// Pointwise det(g + Hess phi) / det g - e^F. Throws std::domain_error naming
/// the worst grid point when g~ is not positive definite.
ScalarField ma_residual(const ScalarField& phi, const BackgroundGeometry& bg);

/// det(g~)/det(g) * g~^{i~j} v_{i~j}, the derivative of ma_residual in direction v.
ScalarField linearized_apply(const ScalarField& phi, const ScalarField& v);

struct IterationRecord {
    double residual_sup = 0.0;
    double step_norm = 0.0;
    int linesearch_backtracks = 0;
    double min_eigenvalue = 0.0;
    int krylov_iterations = 0;
};

struct SolveResult {
    PotentialField potential;
    bool converged = false;
    int iterations = 0;
    double residual_sup = 0.0;
    std::vector<IterationRecord> trace;
    std::string message;
};

/// Newton with right-preconditioned GMRES (flat Laplacian inverse), mean-zero
/// corrections and a positivity-preserving backtracking line search.
SolveResult newton_solve(const BackgroundGeometry& bg, const SolverConfig& cfg = {});

nlohmann::json trace_json(const SolveResult& r);

/// alpha = (-i/2) del phi, so that a = d^c phi.
OneFormField potential_to_one_form(const ScalarField& phi);

/// Components B_{i~j} of (da)^{(1,1)} = i B_{i~j} dz^i ^ dzbar^j.
std::vector<ScalarField> da11_components(const OneFormField& a);

/// Real components a(d/dx^mu) of a = alpha + conj(alpha).
std::vector<ScalarField> real_components(const OneFormField& a);

/// Real Riemannian metric 2 Re(g~_{i~j} dz^i dzbar^j) at a point.
Eigen::MatrixXd real_metric(const Herm& h);

/// sup |d*_{g~} a| with d* = -(1/sqrt G) d_mu (sqrt G G^{mu nu} a_nu).
double gauge_residual(const OneFormField& a, const MetricField& m);

/// L2(g~) pairings of a with the constant forms dx^1, ..., dx^{2n}.
std::vector<double> harmonic_orthogonality(const OneFormField& a, const MetricField& m);

/// L2(g~) norm of a.
double l2_norm(const OneFormField& a, const MetricField& m);

/// sup |g~^{i~j} phi_{i~j} - (n - tr_{g~} g)|.
double almost_kahler_check(const ScalarField& phi, const MetricField& m);

/// n * int omega^{n-1} ^ omega~ / int omega~^n (equals n for cohomologous classes).
double class_constant(const MetricField& m);

}  // namespace scy::solver
