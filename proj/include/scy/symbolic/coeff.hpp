#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace scy::symbolic {

using Rational = boost::rational<std::int64_t>;

/// Exact Gaussian rational re + sqrt(-1) * im.
class Coeff {
public:
    Coeff() = default;
    Coeff(std::int64_t re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    Coeff(Rational re, Rational im = 0) : re_(re), im_(im) {}  // NOLINT

    static Coeff i() { return Coeff(Rational(0), Rational(1)); }
    static Coeff frac(std::int64_t num, std::int64_t den) { return Coeff(Rational(num, den)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.numerator() == 0 && im_.numerator() == 0; }
    bool is_real() const { return im_.numerator() == 0; }

    Coeff conj() const { return Coeff(re_, -im_); }

    Coeff operator-() const { return Coeff(-re_, -im_); }
    Coeff& operator+=(const Coeff& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Coeff& operator-=(const Coeff& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Coeff& operator*=(const Coeff& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = r;
        im_ = m;
        return *this;
    }
    Coeff& operator/=(const Coeff& o);

    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
    friend Coeff operator/(Coeff a, const Coeff& b) { return a /= b; }

    friend bool operator==(const Coeff& a, const Coeff& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    /// Text form used by the golden-file format: `3/2`, `-i`, `(1/2-3i)`.
    std::string str() const;

private:
    Rational re_{0};
    Rational im_{0};
};

/// Parses the output of Coeff::str(). Throws std::invalid_argument.
Coeff parse_coeff(const std::string& text);

}  // namespace scy::symbolic
