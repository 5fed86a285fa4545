#include "scy/solver/ma_solver.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/IterativeSolvers>

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace scy::solver::detail {
class LinearOp;
}

namespace Eigen::internal {
template <>
struct traits<scy::solver::detail::LinearOp> : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace scy::solver::detail {

// Matrix-free operator wrapper for Eigen's iterative solvers.
class LinearOp : public Eigen::EigenBase<LinearOp> {
public:
    using Scalar = double;
    using RealScalar = double;
    using StorageIndex = int;
    enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

    LinearOp(Eigen::Index n, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn) : n_(n), fn_(std::move(fn)) {}

    Eigen::Index rows() const { return n_; }
    Eigen::Index cols() const { return n_; }

    template <typename Rhs>
    Eigen::Product<LinearOp, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
        return Eigen::Product<LinearOp, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        ++calls_;
        return fn_(x);
    }
    int calls() const { return calls_; }

private:
    Eigen::Index n_;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn_;
    mutable int calls_ = 0;
};

}  // namespace scy::solver::detail

namespace Eigen::internal {

template <typename Rhs>
struct generic_product_impl<scy::solver::detail::LinearOp, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<scy::solver::detail::LinearOp, Rhs,
                                generic_product_impl<scy::solver::detail::LinearOp, Rhs>> {
    using Scalar = typename Product<scy::solver::detail::LinearOp, Rhs>::Scalar;

    template <typename Dest>
    static void scaleAndAddTo(Dest& dst, const scy::solver::detail::LinearOp& lhs, const Rhs& rhs,
                              const Scalar& alpha) {
        Eigen::VectorXd x = rhs;
        dst.noalias() += alpha * lhs.apply(x);
    }
};

}  // namespace Eigen::internal

namespace scy::solver {

using torus::DiffOp;

namespace {

// Symbol tables reused by every solver call on one grid.
struct Tables {
    std::vector<std::vector<cd>> hess;       // d_i d_~j, index i * n + j
    std::vector<std::vector<cd>> precond;    // hess / flat Laplacian symbol (0 at k = 0)
    std::vector<cd> flat_inverse;            // 1 / sum_i symbol(d_i d_~i)
};

struct Cache {
    std::unique_ptr<torus::Spectral> spectral;
    std::unique_ptr<Tables> tables;
};

Cache& cache_for(const Grid& g) {
    thread_local std::map<std::pair<int, int>, Cache> caches;
    auto& c = caches[{g.complex_dim, g.n}];
    if (!c.spectral) c.spectral = std::make_unique<torus::Spectral>(g);
    return c;
}

const Tables& tables_for(const Grid& g) {
    Cache& c = cache_for(g);
    if (c.tables) return *c.tables;
    auto t = std::make_unique<Tables>();
    const int n = g.complex_dim;
    torus::Spectral& sp = *c.spectral;
    DiffOp lap;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            DiffOp op = DiffOp::complex_partial(i, false) * DiffOp::complex_partial(j, true);
            t->hess.push_back(sp.symbol_table(op));
            if (i == j) lap = lap + op;
        }
    }
    auto lap_sym = sp.symbol_table(lap);
    t->flat_inverse.resize(lap_sym.size());
    for (std::size_t k = 0; k < lap_sym.size(); ++k) {
        t->flat_inverse[k] = std::abs(lap_sym[k]) > 0.0 ? 1.0 / lap_sym[k] : cd(0.0);
    }
    for (const auto& h : t->hess) {
        std::vector<cd> p(h.size());
        for (std::size_t k = 0; k < h.size(); ++k) p[k] = h[k] * t->flat_inverse[k];
        t->precond.push_back(std::move(p));
    }
    c.tables = std::move(t);
    return *c.tables;
}

std::vector<ScalarField> hessian_with(const std::vector<std::vector<cd>>& tabs, const ScalarField& f) {
    const Grid& g = f.grid;
    const int n = g.complex_dim;
    torus::Spectral& sp = engine(g);
    // for real f, f_{2~1} = conj(f_{1~2}); only the upper triangle is transformed
    std::vector<const std::vector<cd>*> needed;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) needed.push_back(&tabs[i * n + j]);
    auto parts = sp.apply_tables(needed, f);
    std::vector<ScalarField> out(n * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            out[i * n + j] = parts[k++];
            if (j != i) out[j * n + i] = torus::conj(out[i * n + j]);
        }
    }
    for (int i = 0; i < n; ++i)
        for (auto& v : out[i * n + i].values) v = v.real();
    return out;
}

ScalarField to_field(const Grid& g, const Eigen::VectorXd& x) {
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = x[static_cast<Eigen::Index>(i)];
    return f;
}

Eigen::VectorXd to_vector(const ScalarField& f) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) x[static_cast<Eigen::Index>(i)] = f[i].real();
    return x;
}

void remove_mean(Eigen::VectorXd& x) { x.array() -= x.mean(); }

// sum_ij adj(h)[j][i] w_{i~j} at every point
ScalarField contract_adjugate(const MetricField& m, const std::vector<ScalarField>& w) {
    const int n = m.dim();
    ScalarField out(m.grid);
    for (std::size_t p = 0; p < out.size(); ++p) {
        Herm adj = adjugate(m.at(p));
        cd s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += adj(j, i) * w[i * n + j][p];
        out[p] = s.real();
    }
    return out;
}

double min_eigenvalue(const MetricField& m, std::size_t* where = nullptr) {
    double worst = INFINITY;
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        double e = solver::min_eigenvalue(m.at(p));
        if (e < worst) {
            worst = e;
            if (where) *where = p;
        }
    }
    return worst;
}

ScalarField residual_of(const MetricField& m, const BackgroundGeometry& bg) {
    ScalarField r(m.grid);
    for (std::size_t p = 0; p < r.size(); ++p) r[p] = det_real(m.at(p)) - std::exp(bg.F[p].real());
    return r;
}

}  // namespace

void SolverConfig::validate() const {
    if (max_newton <= 0 || krylov_max <= 0 || krylov_restart <= 0) {
        throw std::invalid_argument("iteration limits must be positive");
    }
    if (!(tol > 0) || !(krylov_tol > 0)) throw std::invalid_argument("tolerances must be positive");
    if (!(backtrack > 0 && backtrack < 1)) throw std::invalid_argument("backtrack factor must lie in (0,1)");
    if (!(margin > 0 && margin < 1)) throw std::invalid_argument("positivity margin must lie in (0,1)");
}

Herm MetricField::at(std::size_t p) const {
    const int n = dim();
    Herm m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = h[i * n + j][p];
    return m;
}

torus::Spectral& engine(const Grid& g) { return *cache_for(g).spectral; }

std::vector<ScalarField> complex_hessian(const ScalarField& phi) {
    return hessian_with(tables_for(phi.grid).hess, phi);
}

MetricField metric_from_potential(const ScalarField& phi) {
    MetricField m{phi.grid, complex_hessian(phi)};
    const int n = m.dim();
    for (int i = 0; i < n; ++i)
        for (auto& v : m.h[i * n + i].values) v += 1.0;
    return m;
}

ScalarField det_ratio(const MetricField& m) {
    ScalarField d(m.grid);
    for (std::size_t p = 0; p < d.size(); ++p) d[p] = det_real(m.at(p));
    return d;
}

ScalarField ma_residual(const ScalarField& phi, const BackgroundGeometry& bg) {
    MetricField m = metric_from_potential(phi);
    std::size_t where = 0;
    double e = min_eigenvalue(m, &where);
    if (!(e > 0)) {
        auto pt = m.grid.point(where);
        throw std::domain_error(fmt::format("g~ is not positive definite at grid point ({}, {}, {}, {}), min eigenvalue {:.6g}",
                                            pt[0], pt[1], pt[2], pt[3], e));
    }
    return residual_of(m, bg);
}

ScalarField linearized_apply(const ScalarField& phi, const ScalarField& v) {
    MetricField m = metric_from_potential(phi);
    if (!(min_eigenvalue(m) > 0)) throw std::domain_error("g~ is not positive definite");
    return contract_adjugate(m, complex_hessian(v));
}

SolveResult newton_solve(const BackgroundGeometry& bg, const SolverConfig& cfg) {
    cfg.validate();
    const Grid& g = bg.grid;
    const Tables& tabs = tables_for(g);
    torus::Spectral& sp = engine(g);
    SolveResult res;
    ScalarField phi(g);
    MetricField m = metric_from_potential(phi);
    ScalarField r = residual_of(m, bg);
    double rsup = r.sup_abs();
    double emin = min_eigenvalue(m);
    res.trace.push_back({rsup, 0.0, 0, emin, 0});

    for (int it = 0; it < cfg.max_newton && rsup > cfg.tol; ++it) {
        // right preconditioning: solve (L P^{-1}) y = -r, then v = P^{-1} y
        auto op = [&](const Eigen::VectorXd& y) {
            Eigen::VectorXd out = to_vector(contract_adjugate(m, hessian_with(tabs.precond, to_field(g, y))));
            remove_mean(out);
            return out;
        };
        detail::LinearOp L(static_cast<Eigen::Index>(g.size()), op);
        Eigen::GMRES<detail::LinearOp, Eigen::IdentityPreconditioner> gmres;
        gmres.setTolerance(cfg.krylov_tol);
        gmres.setMaxIterations(cfg.krylov_max);
        gmres.set_restart(cfg.krylov_restart);
        gmres.compute(L);
        Eigen::VectorXd rhs = -to_vector(r);
        remove_mean(rhs);
        Eigen::VectorXd y = gmres.solve(rhs);
        auto spec = sp.forward(to_field(g, y));
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= tabs.flat_inverse[k];
        ScalarField v = sp.inverse(spec);
        for (auto& x : v.values) x = x.real();

        double t = 1.0;
        int backtracks = 0;
        bool accepted = false;
        ScalarField trial;
        MetricField mt;
        ScalarField rt;
        double rt_sup = 0.0, et = 0.0;
        for (; backtracks < 40; ++backtracks, t *= cfg.backtrack) {
            trial = phi + cd(t) * v;
            mt = metric_from_potential(trial);
            et = min_eigenvalue(mt);
            if (et < cfg.margin * emin) continue;
            rt = residual_of(mt, bg);
            rt_sup = rt.sup_abs();
            if (rt_sup < rsup) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.message = fmt::format("line search failed at iteration {} (residual {:.3e})", it + 1, rsup);
            break;
        }
        phi = trial;
        m = std::move(mt);
        r = rt;
        rsup = rt_sup;
        emin = et;
        res.iterations = it + 1;
        res.trace.push_back({rsup, t * v.sup_abs(), backtracks, emin, static_cast<int>(gmres.iterations())});
    }
    res.converged = rsup <= cfg.tol;
    res.residual_sup = rsup;
    if (!res.converged && res.message.empty()) {
        res.message = fmt::format("no convergence in {} Newton iterations (residual {:.3e})", cfg.max_newton, rsup);
    }
    const double top = phi.max_real();
    for (auto& x : phi.values) x = x.real() - top;
    res.potential.phi = std::move(phi);
    return res;
}

nlohmann::json trace_json(const SolveResult& r) {
    nlohmann::json its = nlohmann::json::array();
    for (const auto& rec : r.trace) {
        its.push_back({{"residual_sup", rec.residual_sup},
                       {"step_norm", rec.step_norm},
                       {"linesearch_backtracks", rec.linesearch_backtracks},
                       {"min_eigenvalue", rec.min_eigenvalue},
                       {"krylov_iterations", rec.krylov_iterations}});
    }
    return {{"converged", r.converged}, {"iterations", r.iterations}, {"message", r.message}, {"trace", its}};
}

OneFormField potential_to_one_form(const ScalarField& phi) {
    OneFormField a{phi.grid, {}, phi};
    for (int i = 1; i <= phi.grid.complex_dim; ++i) {
        a.alpha.push_back(cd(0.0, -0.5) * torus::spectral_partial(engine(phi.grid), phi, i, false));
    }
    return a;
}

std::vector<ScalarField> da11_components(const OneFormField& a) {
    // i B_{i~j} dz^i ^ dzbar^j = dbar alpha + del conj(alpha), so
    // B_{i~j} = -i (d_i conj(alpha_j) - d_~j alpha_i)
    const int n = a.grid.complex_dim;
    if (a.potential) return complex_hessian(*a.potential);  // d d^c phi = i phi_{i~j} dz^i ^ dzbar^j
    torus::Spectral& sp = engine(a.grid);
    std::vector<ScalarField> b(n * n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            ScalarField t1 = torus::spectral_partial(sp, torus::conj(a.alpha[j - 1]), i, false);
            ScalarField t2 = torus::spectral_partial(sp, a.alpha[i - 1], j, true);
            b[(i - 1) * n + (j - 1)] = cd(0.0, -1.0) * (t1 - t2);
        }
    }
    return b;
}

std::vector<ScalarField> real_components(const OneFormField& a) {
    // dz^i(d/dx^{2i-1}) = 1, dz^i(d/dx^{2i}) = i
    std::vector<ScalarField> out;
    for (const auto& al : a.alpha) {
        ScalarField ax(a.grid), ay(a.grid);
        for (std::size_t p = 0; p < al.size(); ++p) {
            ax[p] = 2.0 * al[p].real();
            ay[p] = -2.0 * al[p].imag();
        }
        out.push_back(std::move(ax));
        out.push_back(std::move(ay));
    }
    return out;
}

Eigen::MatrixXd real_metric(const Herm& h) {
    const int n = static_cast<int>(h.rows());
    auto e = [](int i, int mu) -> cd {
        if (mu / 2 != i) return 0.0;
        return mu % 2 == 0 ? cd(1.0) : cd(0.0, 1.0);
    };
    Eigen::MatrixXd G(2 * n, 2 * n);
    for (int mu = 0; mu < 2 * n; ++mu) {
        for (int nu = 0; nu < 2 * n; ++nu) {
            cd s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += h(i, j) * e(i, mu) * std::conj(e(j, nu));
            G(mu, nu) = 2.0 * s.real();
        }
    }
    return G;
}

namespace {

// sqrt(det G) G^{mu nu} a_nu for every mu
std::vector<ScalarField> weighted_vector(const OneFormField& a, const MetricField& m) {
    const int rd = 2 * m.dim();
    auto comps = real_components(a);
    std::vector<ScalarField> out(rd, ScalarField(m.grid));
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        Eigen::MatrixXd G = real_metric(m.at(p));
        Eigen::MatrixXd Ginv = G.inverse();
        const double w = std::sqrt(G.determinant());
        for (int mu = 0; mu < rd; ++mu) {
            double s = 0.0;
            for (int nu = 0; nu < rd; ++nu) s += Ginv(mu, nu) * comps[nu][p].real();
            out[mu][p] = w * s;
        }
    }
    return out;
}

}  // namespace

double gauge_residual(const OneFormField& a, const MetricField& m) {
    const int rd = 2 * m.dim();
    auto V = weighted_vector(a, m);
    torus::Spectral& sp = engine(m.grid);
    ScalarField div(m.grid);
    for (int mu = 0; mu < rd; ++mu) div = div + sp.apply(DiffOp::real_axis(mu), V[mu]);
    double worst = 0.0;
    for (std::size_t p = 0; p < div.size(); ++p) {
        const double w = std::sqrt(real_metric(m.at(p)).determinant());
        worst = std::max(worst, std::abs(div[p].real()) / w);
    }
    return worst;
}

std::vector<double> harmonic_orthogonality(const OneFormField& a, const MetricField& m) {
    auto V = weighted_vector(a, m);
    std::vector<double> out;
    for (const auto& v : V) out.push_back(v.mean().real());
    return out;
}

double l2_norm(const OneFormField& a, const MetricField& m) {
    auto comps = real_components(a);
    const int rd = 2 * m.dim();
    double s = 0.0;
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        Eigen::MatrixXd G = real_metric(m.at(p));
        Eigen::VectorXd av(rd);
        for (int mu = 0; mu < rd; ++mu) av(mu) = comps[mu][p].real();
        s += av.dot(G.inverse() * av) * std::sqrt(G.determinant());
    }
    return std::sqrt(s / static_cast<double>(m.grid.size()));
}

double almost_kahler_check(const ScalarField& phi, const MetricField& m) {
    const int n = m.dim();
    auto hess = complex_hessian(phi);
    double worst = 0.0;
    for (std::size_t p = 0; p < phi.size(); ++p) {
        Herm inv = m.at(p).inverse();
        cd lap = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) lap += inv(j, i) * hess[i * n + j][p];
        const double tr_inv = inv.trace().real();
        worst = std::max(worst, std::abs(lap.real() - (n - tr_inv)));
    }
    return worst;
}

double class_constant(const MetricField& m) {
    double tr = 0.0, det = 0.0;
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        Herm h = m.at(p);
        tr += h.trace().real();
        det += det_real(h);
    }
    return tr / det;
}

}  // namespace scy::solver
