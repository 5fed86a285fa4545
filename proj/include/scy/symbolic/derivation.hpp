#pragma once

#include "scy/symbolic/form_expr.hpp"

namespace scy::symbolic {

/// Structure-equation rules that define d on coframe generators,
/// connection forms and tensor components.
///
///   d t^i   = -w^i_j ^ t^j + N^i_{~j~k} ~t^j ^ ~t^k
///   d w^i_j = -w^i_k ^ w^k_j + R^i_{jk~l} t^k ^ ~t^l + K^i_{jkl} t^k ^ t^l + Kb^i_{j~k~l} ~t^k ^ ~t^l
///   d T     = T_{,p} t^p + T_{,~p} ~t^p - (connection terms per index slot)
///
/// Conjugated generators and symbols are differentiated through conj.
class DerivationContext {
public:
    /// Almost-complex structure with torsion and full curvature.
    static DerivationContext standard() { return DerivationContext(true); }
    /// Integrable structure: torsion terms dropped.
    static DerivationContext integrable() { return DerivationContext(false); }

    bool torsion() const { return torsion_; }

    FormExpr d_generator(Gen g) const;
    /// d of a single symbol (power one). Throws std::invalid_argument for
    /// families without a derivative rule.
    FormExpr d_symbol(const Symbol& s) const;

private:
    explicit DerivationContext(bool torsion) : torsion_(torsion) {}
    bool torsion_;
};

/// Leibniz-rule exterior derivative. The output may contain connection forms.
FormExpr ext_d(const FormExpr& e, const DerivationContext& ctx = DerivationContext::standard());

/// Torsion 2-form Theta^i = N^i_{~j~k} ~t^j ^ ~t^k.
FormExpr torsion_form(int i);
/// Curvature 2-form Omega^i_j.
FormExpr curvature_form(int i, int j);

}  // namespace scy::symbolic
