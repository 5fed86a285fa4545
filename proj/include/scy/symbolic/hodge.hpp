#pragma once

#include "scy/symbolic/form_expr.hpp"

#include <utility>
#include <vector>

namespace scy::symbolic {

/// All 16 canonical basis words of the exterior algebra on {t1,t2,~t1,~t2}.
std::vector<Word> basis_words();

/// Image of one canonical basis word under the star: (sign, word).
std::pair<int, Word> hodge_of_basis(const Word& w);

/// Monomial-wise Hodge star of the unitary coframe.
/// Throws std::invalid_argument if connection forms are present.
FormExpr hodge_star(const FormExpr& e);

/// The volume form -t1^~t1^t2^~t2 against which pairings are normalized.
FormExpr volume_form();

/// Hermitian pairing <b, c> defined by b ^ conj(*c) = <b, c> * volume_form().
FormExpr hermitian_pairing(const FormExpr& b, const FormExpr& c);

/// Complex-bilinear extension of the real inner product: <b, conj c>.
FormExpr bilinear_pairing(const FormExpr& b, const FormExpr& c);

/// The g~-Kähler form sqrt(-1) sum_i t^i ^ ~t^i.
FormExpr kahler_form();

}  // namespace scy::symbolic
