#pragma once

#include "scy/symbolic/coeff.hpp"
#include "scy/symbolic/symbol.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace scy::symbolic {

/// Coframe generators in their global order:
/// t1 < t2 < ~t1 < ~t2 < w11 < w12 < w21 < w22 < ~w11 < ~w12 < ~w21 < ~w22.
/// `t` is the unitary (1,0)-coframe, `w` the connection 1-forms.
using Gen = std::uint8_t;
using Word = std::vector<Gen>;

constexpr int kFrameGenerators = 4;
constexpr int kGenerators = 12;
constexpr int kMaxDegree = 4;

Gen theta_gen(int i);
Gen theta_bar_gen(int i);
Gen conn_gen(int i, int j);
Gen conn_bar_gen(int i, int j);
Gen conj_gen(Gen g);
bool is_connection(Gen g);
bool is_barred_frame(Gen g);
std::string gen_name(Gen g);

/// Symbol raised to a half-integer power (stored doubled).
struct Factor {
    Symbol symbol;
    int twice_power = 2;

    friend auto operator<=>(const Factor&, const Factor&) = default;
};

struct MonomialKey {
    std::vector<Factor> factors;  // sorted by symbol, no zero powers
    Word word;                    // strictly increasing

    friend auto operator<=>(const MonomialKey&, const MonomialKey&) = default;
};

/// One product term as written by a user; need not be canonical.
struct Monomial {
    Coeff coeff{1};
    std::vector<Factor> factors;
    Word word;
};

/// Exact sum of wedge monomials with Gaussian-rational coefficients.
/// Every instance is held in normal form.
class FormExpr {
public:
    FormExpr() = default;
    explicit FormExpr(const std::vector<Monomial>& raw);

    static FormExpr constant(const Coeff& c);
    static FormExpr symbol(const Symbol& s, int twice_power = 2);
    static FormExpr generator(Gen g);
    static FormExpr theta(int i) { return generator(theta_gen(i)); }
    static FormExpr theta_bar(int i) { return generator(theta_bar_gen(i)); }
    static FormExpr conn(int i, int j) { return generator(conn_gen(i, j)); }

    const std::map<MonomialKey, Coeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool has_connection() const;
    /// True if every term has the same form degree.
    bool is_homogeneous() const;
    int degree() const;  // degree of the first term; 0 for the zero expression

    FormExpr& operator+=(const FormExpr& o);
    FormExpr& operator-=(const FormExpr& o);
    FormExpr operator-() const;
    FormExpr& operator*=(const Coeff& c);

    friend FormExpr operator+(FormExpr a, const FormExpr& b) { return a += b; }
    friend FormExpr operator-(FormExpr a, const FormExpr& b) { return a -= b; }
    friend FormExpr operator*(const Coeff& c, FormExpr a) { return a *= c; }
    friend FormExpr operator*(FormExpr a, const Coeff& c) { return a *= c; }
    /// Wedge product.
    friend FormExpr operator*(const FormExpr& a, const FormExpr& b);

    friend bool operator==(const FormExpr& a, const FormExpr& b) { return a.terms_ == b.terms_; }

    /// Adds c * factors * word, canonicalizing as it goes.
    void add_term(const Coeff& c, std::vector<Factor> factors, Word word);

private:
    std::map<MonomialKey, Coeff> terms_;
};

FormExpr wedge(const FormExpr& a, const FormExpr& b);
FormExpr conj(const FormExpr& e);
FormExpr normal_form(const FormExpr& e);
FormExpr apply_symmetries(const FormExpr& e);

/// Monomials with exactly p unbarred and q barred frame generators.
/// Throws std::invalid_argument when connection forms remain.
FormExpr type_part(const FormExpr& e, int p, int q);

/// Sets every connection form to zero (normal-frame evaluation).
FormExpr at_point(const FormExpr& e);

/// Scalar coefficient of a given canonical word (sorted generators).
FormExpr coefficient_of(const FormExpr& e, const Word& word);

/// Coefficient against t1^t2^~t1^~t2.
FormExpr top_coefficient(const FormExpr& e);

/// Real part (e + conj e)/2.
FormExpr real_part(const FormExpr& e);

/// Sum over concrete indices of a generated expression.
template <class Fn>
FormExpr sum12(Fn&& fn) {
    FormExpr out;
    for (int i = 1; i <= 2; ++i) out += fn(i);
    return out;
}

template <class Fn>
FormExpr sum12x2(Fn&& fn) {
    FormExpr out;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) out += fn(i, j);
    return out;
}

/// Convenience for symbol-valued scalars.
FormExpr sym(const std::string& fam, std::vector<Index> upper = {}, std::vector<Index> lower = {},
             std::vector<Index> derivs = {});
FormExpr sym_pow(const std::string& fam, std::vector<Index> lower, int twice_power);

}  // namespace scy::symbolic
