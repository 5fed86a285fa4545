#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace scy::torus {

using cd = std::complex<double>;

/// Uniform periodic grid on [0,1)^{2 complex_dim}.
struct Grid {
    int complex_dim = 2;
    int n = 16;

    int real_dim() const { return 2 * complex_dim; }
    std::size_t size() const;
    /// Multi-index of a flat point index, axis 0 varying slowest.
    std::array<int, 4> point(std::size_t flat) const;
    double coordinate(std::size_t flat, int axis) const { return point(flat)[axis] / static_cast<double>(n); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws std::invalid_argument unless complex_dim is 1 or 2 and n is even in [4, 256].
Grid make_grid(int complex_dim, int n);

/// Samples on a grid, stored complex; real fields keep zero imaginary parts.
struct ScalarField {
    Grid grid;
    std::vector<cd> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, cd fill = 0.0) : grid(g), values(g.size(), fill) {}

    std::size_t size() const { return values.size(); }
    cd& operator[](std::size_t i) { return values[i]; }
    const cd& operator[](std::size_t i) const { return values[i]; }

    cd mean() const;
    double max_real() const;
    double min_real() const;
    double sup_abs() const;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(cd s, const ScalarField& a);
ScalarField conj(const ScalarField& a);

/// Sets the number of FFTW threads for plans created afterwards (default 1).
void set_fft_threads(int threads);
int fft_threads();

/// A constant-coefficient differential operator: sum of coeff * prod_axis d^{e}.
struct DiffOp {
    struct Term {
        cd coeff;
        std::array<int, 4> exponents{};
    };
    std::vector<Term> terms;

    static DiffOp identity();
    static DiffOp real_axis(int axis);
    /// d/dz^i (barred = false) or d/dzbar^i, i in {1, .., complex_dim}
    static DiffOp complex_partial(int i, bool barred);
    DiffOp operator*(const DiffOp& o) const;
    DiffOp operator+(const DiffOp& o) const;
};

/// Fourier symbol of one term at integer wavenumbers. Odd per-axis powers
/// vanish on the Nyquist mode; even powers keep it.
cd symbol(const DiffOp& op, const std::array<int, 4>& k, int n);

/// FFT engine bound to one grid. Not thread-safe; create one per owner.
class Spectral {
public:
    explicit Spectral(const Grid& g);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const Grid& grid() const { return grid_; }

    /// Unnormalized forward transform.
    std::vector<cd> forward(const ScalarField& f);
    /// Inverse transform including the 1/size normalization.
    ScalarField inverse(const std::vector<cd>& spectrum);

    /// Symbol of op at every spectral index, for reuse across applications.
    std::vector<cd> symbol_table(const DiffOp& op) const;
    ScalarField apply(const DiffOp& op, const ScalarField& f);
    /// Applies precomputed symbol tables sharing one forward transform.
    std::vector<ScalarField> apply_tables(const std::vector<const std::vector<cd>*>& tables, const ScalarField& f);
    /// Applies several operators sharing one forward transform.
    std::vector<ScalarField> apply(const std::vector<DiffOp>& ops, const ScalarField& f);
    /// Multiplies the spectrum by fn(k) where k are signed wavenumbers.
    template <class Fn>
    ScalarField multiply(const ScalarField& f, Fn&& fn) {
        auto s = forward(f);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= fn(wavenumbers(i));
        return inverse(s);
    }
    /// Signed wavenumbers of a flat spectral index (Nyquist reported as +n/2).
    std::array<int, 4> wavenumbers(std::size_t flat) const;

private:
    struct Impl;
    Grid grid_;
    std::unique_ptr<Impl> impl_;
};

/// spectral_partial(f, i, barred): d/dz^i or d/dzbar^i by Fourier differentiation.
ScalarField spectral_partial(Spectral& sp, const ScalarField& f, int i, bool barred);

struct Family {
    enum class Kind { zero, single_mode, random_band } kind = Kind::zero;
    double amplitude = 0.0;
    int modes = 2;
    std::uint64_t seed = 0;
};

/// Parses "zero", "single-mode", "random-band".
Family::Kind parse_family(const std::string& name);
std::string family_name(Family::Kind k);

/// The un-normalized field of a family: A sin(2 pi x^1) for single-mode; for
/// random-band a seeded sum of cosines over max|k_d| <= modes with weights
/// 1/(1+|k|^2), scaled to RMS A/sqrt(2) independently of the grid size.
ScalarField sample_family(const Grid& g, const Family& fam);

/// Flat reference metric g = identity in z^i = x^{2i-1} + i x^{2i}, and a
/// forcing F normalized so that mean(e^F) = 1.
struct BackgroundGeometry {
    Grid grid;
    Family family;
    ScalarField F;
    double shift = 0.0;  // constant subtracted from the raw forcing
};

/// Throws std::invalid_argument for negative amplitude and std::range_error
/// when e^F under- or overflows.
BackgroundGeometry make_background(const Grid& g, const Family& fam);
/// Uses a caller-supplied raw forcing (normalized the same way).
BackgroundGeometry make_background(const Grid& g, const ScalarField& raw_F, Family fam = {});

enum class Volume { reference, tilde };

/// Mean times total volume. The omega^n / n! volume of the unit torus is
/// 2^n since i dz ^ dzbar = 2 dx ^ dy.
/// For Volume::tilde, `det_ratio` must hold det(g~)/det(g) per point.
double integrate(const ScalarField& f, Volume weight = Volume::reference, const ScalarField* det_ratio = nullptr);

/// Binary snapshot: "SCYF", int32 complex_dim, int32 n, int32 kind (0 real,
/// 1 complex), then little-endian float64 samples in flat order.
void write_snapshot(const std::string& path, const ScalarField& f, bool complex_values);
ScalarField read_snapshot(const std::string& path);

}  // namespace scy::torus
