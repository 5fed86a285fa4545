#include "scy/symbolic/coeff.hpp"

#include <stdexcept>

namespace scy::symbolic {

Coeff& Coeff::operator/=(const Coeff& o) {
    if (o.is_zero()) {
        throw std::domain_error("Coeff: division by zero");
    }
    Rational n = o.re_ * o.re_ + o.im_ * o.im_;
    Coeff inv(o.re_ / n, -o.im_ / n);
    return *this *= inv;
}

namespace {

std::string rat_str(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) {
        s += "/" + std::to_string(r.denominator());
    }
    return s;
}

Rational parse_rational(const std::string& t) {
    if (t.empty()) {
        throw std::invalid_argument("empty rational");
    }
    std::size_t pos = t.find('/');
    std::size_t used = 0;
    if (pos == std::string::npos) {
        long long v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument("bad rational: " + t);
        return Rational(v);
    }
    long long n = std::stoll(t.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument("bad rational: " + t);
    std::string ds = t.substr(pos + 1);
    long long d = std::stoll(ds, &used);
    if (used != ds.size() || d == 0) throw std::invalid_argument("bad rational: " + t);
    return Rational(n, d);
}

// Parses a signed imaginary part such as "i", "-i", "3/2i".
Rational parse_imag(const std::string& t) {
    if (t.empty() || t.back() != 'i') throw std::invalid_argument("bad imaginary part: " + t);
    std::string body = t.substr(0, t.size() - 1);
    if (body.empty() || body == "+") return Rational(1);
    if (body == "-") return Rational(-1);
    if (body.front() == '+') body.erase(0, 1);
    return parse_rational(body);
}

}  // namespace

std::string Coeff::str() const {
    if (im_.numerator() == 0) return rat_str(re_);
    std::string im_part;
    if (im_ == Rational(1)) {
        im_part = "i";
    } else if (im_ == Rational(-1)) {
        im_part = "-i";
    } else {
        im_part = rat_str(im_) + "i";
    }
    if (re_.numerator() == 0) return im_part;
    std::string sep = im_ > Rational(0) ? "+" : "";
    return "(" + rat_str(re_) + sep + im_part + ")";
}

Coeff parse_coeff(const std::string& text) {
    std::string t = text;
    if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
        t = t.substr(1, t.size() - 2);
        // split at the sign that starts the imaginary part
        std::size_t split = std::string::npos;
        for (std::size_t k = 1; k < t.size(); ++k) {
            if ((t[k] == '+' || t[k] == '-') && t[k - 1] != '/') split = k;
        }
        if (split == std::string::npos) throw std::invalid_argument("bad complex coefficient: " + text);
        return Coeff(parse_rational(t.substr(0, split)), parse_imag(t.substr(split)));
    }
    if (!t.empty() && t.back() == 'i') return Coeff(Rational(0), parse_imag(t));
    return Coeff(parse_rational(t));
}

}  // namespace scy::symbolic
