#pragma once

#include <Eigen/Dense>

#include <complex>

namespace scy::solver {

using cd = std::complex<double>;
/// Hermitian matrix of size 1 or 2 in the flat unitary frame.
using Herm = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

/// Eigenvalues in decreasing order and unitary eigenvectors (columns) with the
/// largest-modulus entry of each column real and positive.
struct EigenPair {
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1> values;
    Herm vectors;
};

inline EigenPair hermitian_eigen(const Herm& h) {
    EigenPair e;
    const auto n = h.rows();
    e.values.resize(n);
    e.vectors = Herm::Identity(n, n);
    if (n == 1) {
        e.values(0) = h(0, 0).real();
        return e;
    }
    const double a = h(0, 0).real(), d = h(1, 1).real();
    const cd b = h(0, 1);
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(b));
    e.values << mid + rad, mid - rad;
    if (std::abs(b) == 0.0) {
        if (d > a) e.vectors << 0, 1, 1, 0;
        return e;
    }
    // (h - lambda_1) v = 0 from whichever row gives the longer vector; the
    // second column is its orthogonal complement so the basis stays unitary
    // even when the eigenvalues (nearly) coincide
    const double lam = e.values(0);
    Eigen::Matrix<cd, 2, 1> r1, r2;
    r1 << -b, a - lam;
    r2 << d - lam, -std::conj(b);
    Eigen::Matrix<cd, 2, 1> v = r1.norm() >= r2.norm() ? r1 : r2;
    const double len = v.norm();
    if (!(len > 0.0)) return e;
    v /= len;
    const int big = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v *= std::abs(v(big)) / v(big);
    Eigen::Matrix<cd, 2, 1> w;
    w << -std::conj(v(1)), std::conj(v(0));
    const int big2 = std::abs(w(0)) >= std::abs(w(1)) ? 0 : 1;
    w *= std::abs(w(big2)) / w(big2);
    e.vectors.col(0) = v;
    e.vectors.col(1) = w;
    return e;
}

inline double min_eigenvalue(const Herm& h) {
    if (h.rows() == 1) return h(0, 0).real();
    const double a = h(0, 0).real(), d = h(1, 1).real();
    return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
}

inline double det_real(const Herm& h) {
    if (h.rows() == 1) return h(0, 0).real();
    return (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
}

/// Transposed cofactor matrix, so adj(h) h = det(h) I.
inline Herm adjugate(const Herm& h) {
    Herm a(h.rows(), h.cols());
    if (h.rows() == 1) {
        a(0, 0) = 1.0;
        return a;
    }
    a << h(1, 1), -h(0, 1), -h(1, 0), h(0, 0);
    return a;
}

}  // namespace scy::solver
