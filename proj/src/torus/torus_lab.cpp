#include "scy/torus/torus_lab.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace scy::torus {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::atomic<int> g_fft_threads{1};
std::mutex g_plan_mutex;  // FFTW planning is not thread-safe

ScalarField zip(const ScalarField& a, const ScalarField& b, auto&& op) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
}

}  // namespace

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int d = 0; d < real_dim(); ++d) s *= static_cast<std::size_t>(n);
    return s;
}

std::array<int, 4> Grid::point(std::size_t flat) const {
    std::array<int, 4> p{};
    for (int d = real_dim() - 1; d >= 0; --d) {
        p[d] = static_cast<int>(flat % n);
        flat /= n;
    }
    return p;
}

Grid make_grid(int complex_dim, int n) {
    if (complex_dim != 1 && complex_dim != 2) throw std::invalid_argument("complex_dim must be 1 or 2");
    if (n < 4 || n > 256 || n % 2 != 0) throw std::invalid_argument("points per axis must be even and in [4, 256]");
    return Grid{complex_dim, n};
}

namespace {

// Neumaier compensated summation; keeps means accurate to a few ulps on
// large grids
double compensated_sum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

}  // namespace

cd ScalarField::mean() const {
    std::vector<double> re(values.size()), im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    const double n = static_cast<double>(values.size());
    return {compensated_sum(re) / n, compensated_sum(im) / n};
}

double ScalarField::max_real() const {
    double m = -INFINITY;
    for (const auto& v : values) m = std::max(m, v.real());
    return m;
}

double ScalarField::min_real() const {
    double m = INFINITY;
    for (const auto& v : values) m = std::min(m, v.real());
    return m;
}

double ScalarField::sup_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](cd x, cd y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](cd x, cd y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](cd x, cd y) { return x * y; });
}
ScalarField operator*(cd s, const ScalarField& a) {
    ScalarField out = a;
    for (auto& v : out.values) v *= s;
    return out;
}
ScalarField conj(const ScalarField& a) {
    ScalarField out = a;
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

void set_fft_threads(int threads) { g_fft_threads = std::max(1, threads); }
int fft_threads() { return g_fft_threads; }

DiffOp DiffOp::identity() { return DiffOp{{Term{1.0, {}}}}; }

DiffOp DiffOp::real_axis(int axis) {
    Term t{1.0, {}};
    t.exponents[axis] = 1;
    return DiffOp{{t}};
}

DiffOp DiffOp::complex_partial(int i, bool barred) {
    // d/dz = (d/dx - i d/dy) / 2, d/dzbar = (d/dx + i d/dy) / 2
    DiffOp x = real_axis(2 * i - 2), y = real_axis(2 * i - 1);
    for (auto& t : x.terms) t.coeff = 0.5;
    for (auto& t : y.terms) t.coeff = barred ? cd(0, 0.5) : cd(0, -0.5);
    return x + y;
}

DiffOp DiffOp::operator*(const DiffOp& o) const {
    DiffOp out;
    for (const auto& a : terms) {
        for (const auto& b : o.terms) {
            Term t{a.coeff * b.coeff, {}};
            for (int d = 0; d < 4; ++d) t.exponents[d] = a.exponents[d] + b.exponents[d];
            out.terms.push_back(t);
        }
    }
    return out;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp out = *this;
    out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
    return out;
}

cd symbol(const DiffOp& op, const std::array<int, 4>& k, int n) {
    cd total = 0.0;
    for (const auto& t : op.terms) {
        cd s = t.coeff;
        for (int d = 0; d < 4 && s != 0.0; ++d) {
            int e = t.exponents[d];
            if (e == 0) continue;
            bool nyquist = std::abs(k[d]) * 2 == n;
            if (e % 2 == 1 && nyquist) {
                s = 0.0;
                break;
            }
            const cd ik(0.0, two_pi * k[d]);
            for (int r = 0; r < e; ++r) s *= ik;
        }
        total += s;
    }
    return total;
}

struct Spectral::Impl {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Spectral::Spectral(const Grid& g) : grid_(g), impl_(std::make_unique<Impl>()) {
    std::lock_guard lock(g_plan_mutex);
    static bool threads_ready = [] { return fftw_init_threads() != 0; }();
    if (threads_ready) fftw_plan_with_nthreads(g_fft_threads);
    impl_->buf = fftw_alloc_complex(g.size());
    int dims[4];
    for (int d = 0; d < g.real_dim(); ++d) dims[d] = g.n;
    impl_->fwd = fftw_plan_dft(g.real_dim(), dims, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(g.real_dim(), dims, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Spectral::~Spectral() {
    std::lock_guard lock(g_plan_mutex);
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->buf);
}

std::vector<cd> Spectral::forward(const ScalarField& f) {
    if (!(f.grid == grid_)) throw std::invalid_argument("field grid does not match the transform");
    std::memcpy(impl_->buf, f.values.data(), sizeof(cd) * f.size());
    fftw_execute(impl_->fwd);
    std::vector<cd> out(f.size());
    std::memcpy(static_cast<void*>(out.data()), impl_->buf, sizeof(cd) * f.size());
    return out;
}

ScalarField Spectral::inverse(const std::vector<cd>& spectrum) {
    std::memcpy(impl_->buf, spectrum.data(), sizeof(cd) * spectrum.size());
    fftw_execute(impl_->bwd);
    ScalarField out(grid_);
    std::memcpy(static_cast<void*>(out.values.data()), impl_->buf, sizeof(cd) * spectrum.size());
    const double scale = 1.0 / static_cast<double>(spectrum.size());
    for (auto& v : out.values) v *= scale;
    return out;
}

std::array<int, 4> Spectral::wavenumbers(std::size_t flat) const {
    auto p = grid_.point(flat);
    for (int d = 0; d < grid_.real_dim(); ++d) {
        if (p[d] > grid_.n / 2) p[d] -= grid_.n;
    }
    return p;
}

ScalarField Spectral::apply(const DiffOp& op, const ScalarField& f) { return apply(std::vector<DiffOp>{op}, f)[0]; }

std::vector<cd> Spectral::symbol_table(const DiffOp& op) const {
    std::vector<cd> t(grid_.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = symbol(op, wavenumbers(i), grid_.n);
    return t;
}

std::vector<ScalarField> Spectral::apply(const std::vector<DiffOp>& ops, const ScalarField& f) {
    std::vector<std::vector<cd>> tables;
    for (const auto& op : ops) tables.push_back(symbol_table(op));
    std::vector<const std::vector<cd>*> ptrs;
    for (const auto& t : tables) ptrs.push_back(&t);
    return apply_tables(ptrs, f);
}

std::vector<ScalarField> Spectral::apply_tables(const std::vector<const std::vector<cd>*>& tables,
                                                const ScalarField& f) {
    auto s = forward(f);
    std::vector<ScalarField> out;
    std::vector<cd> work(s.size());
    for (const auto* t : tables) {
        for (std::size_t i = 0; i < s.size(); ++i) work[i] = s[i] * (*t)[i];
        out.push_back(inverse(work));
    }
    return out;
}

ScalarField spectral_partial(Spectral& sp, const ScalarField& f, int i, bool barred) {
    return sp.apply(DiffOp::complex_partial(i, barred), f);
}

Family::Kind parse_family(const std::string& name) {
    if (name == "zero") return Family::Kind::zero;
    if (name == "single-mode") return Family::Kind::single_mode;
    if (name == "random-band") return Family::Kind::random_band;
    throw std::invalid_argument("unknown family: " + name);
}

std::string family_name(Family::Kind k) {
    switch (k) {
        case Family::Kind::zero:
            return "zero";
        case Family::Kind::single_mode:
            return "single-mode";
        case Family::Kind::random_band:
            return "random-band";
    }
    return "?";
}

ScalarField sample_family(const Grid& g, const Family& fam) {
    ScalarField F(g);
    if (fam.kind == Family::Kind::zero || fam.amplitude == 0.0) return F;
    if (fam.kind == Family::Kind::single_mode) {
        for (std::size_t i = 0; i < F.size(); ++i) F[i] = fam.amplitude * std::sin(two_pi * g.coordinate(i, 0));
        return F;
    }
    // Random band: modes with max |k_d| <= K, one of each +-k pair, drawn in
    // a fixed order that does not depend on the grid.
    const int K = fam.modes;
    if (K < 1 || 2 * K >= g.n) throw std::invalid_argument("random-band modes must satisfy 1 <= modes < n/2");
    std::mt19937_64 rng(fam.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), phase(0.0, two_pi);
    struct Mode {
        std::array<int, 4> k;
        double c, psi;
    };
    std::vector<Mode> modes;
    const int rd = g.real_dim();
    std::array<int, 4> k{};
    std::size_t count = 1;
    for (int d = 0; d < rd; ++d) count *= static_cast<std::size_t>(2 * K + 1);
    double norm2 = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        std::size_t r = m;
        for (int d = rd - 1; d >= 0; --d) {
            k[d] = static_cast<int>(r % (2 * K + 1)) - K;
            r /= (2 * K + 1);
        }
        int first = 0;
        double k2 = 0.0;
        for (int d = 0; d < rd; ++d) {
            if (first == 0) first = k[d];
            k2 += k[d] * k[d];
        }
        if (first <= 0) continue;
        double c = unit(rng) / (1.0 + k2);
        double psi = phase(rng);
        modes.push_back({k, c, psi});
        norm2 += c * c;
    }
    const double scale = fam.amplitude / std::sqrt(norm2);
    for (std::size_t i = 0; i < F.size(); ++i) {
        double v = 0.0;
        for (const auto& md : modes) {
            double arg = md.psi;
            for (int d = 0; d < rd; ++d) arg += two_pi * md.k[d] * g.coordinate(i, d);
            v += md.c * std::cos(arg);
        }
        F[i] = scale * v;
    }
    return F;
}

BackgroundGeometry make_background(const Grid& g, const ScalarField& raw_F, Family fam) {
    double peak = 0.0, top = -std::numeric_limits<double>::infinity();
    for (const auto& v : raw_F.values) {
        peak = std::max(peak, std::abs(v.real()));
        top = std::max(top, v.real());
    }
    if (peak > 600.0) throw std::range_error("forcing too large: e^F leaves the double range");
    // mean(e^F) = 1 after subtracting log mean(e^F); the ratio is taken
    // against the max to keep the exponentials in range
    std::vector<double> terms(raw_F.size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::exp(raw_F[i].real() - top);
    double shift = top + std::log(compensated_sum(terms) / static_cast<double>(raw_F.size()));
    BackgroundGeometry bg{g, fam, ScalarField(g), shift};
    for (std::size_t i = 0; i < raw_F.size(); ++i) bg.F[i] = raw_F[i].real() - shift;
    return bg;
}

BackgroundGeometry make_background(const Grid& g, const Family& fam) {
    if (fam.amplitude < 0.0) throw std::invalid_argument("amplitude must be non-negative");
    if (fam.kind == Family::Kind::zero) {
        Family z = fam;
        return BackgroundGeometry{g, z, ScalarField(g), 0.0};
    }
    return make_background(g, sample_family(g, fam), fam);
}

double integrate(const ScalarField& f, Volume weight, const ScalarField* det_ratio) {
    const double total = std::ldexp(1.0, f.grid.complex_dim);
    if (weight == Volume::reference) return f.mean().real() * total;
    if (!det_ratio) throw std::invalid_argument("tilde volume needs det(g~)/det(g)");
    return (f * *det_ratio).mean().real() * total;
}

void write_snapshot(const std::string& path, const ScalarField& f, bool complex_values) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("SCYF", 4);
    auto put32 = [&](std::int32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint32_t>(v) >> (8 * i)) & 0xff);
        os.write(reinterpret_cast<const char*>(b), 4);
    };
    auto put64 = [&](double d) {
        std::uint64_t u;
        std::memcpy(&u, &d, 8);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
        os.write(reinterpret_cast<const char*>(b), 8);
    };
    put32(f.grid.complex_dim);
    put32(f.grid.n);
    put32(complex_values ? 1 : 0);
    for (const auto& v : f.values) {
        put64(v.real());
        if (complex_values) put64(v.imag());
    }
}

ScalarField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SCYF", 4) != 0) throw std::runtime_error("not a field snapshot: " + path);
    auto get32 = [&]() {
        unsigned char b[4];
        is.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t u = 0;
        for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return static_cast<std::int32_t>(u);
    };
    auto get64 = [&]() {
        unsigned char b[8];
        is.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        double d;
        std::memcpy(&d, &u, 8);
        return d;
    };
    int dim = get32(), n = get32(), kind = get32();
    ScalarField f(make_grid(dim, n));
    for (auto& v : f.values) {
        double re = get64();
        double im = kind ? get64() : 0.0;
        v = cd(re, im);
    }
    if (!is) throw std::runtime_error("truncated snapshot: " + path);
    return f;
}

}  // namespace scy::torus
