#pragma once

#include "scy/symbolic/form_expr.hpp"

#include <ostream>
#include <string>

namespace scy::symbolic {

// Golden-file text format, one term per line:
//
//   coeff * sym[upper;lower|derivs] * sym**p ^ gen ^ gen
//
// `~` marks a barred index or generator, `!` a conjugated symbol, `**p` a
// rational power. Terms are separated by " + "; the zero expression is "0".

std::string to_text(const FormExpr& e);
std::string to_text_multiline(const FormExpr& e);

/// Inverse of to_text / to_text_multiline. Throws std::invalid_argument.
FormExpr parse_expr(const std::string& text);

inline std::ostream& operator<<(std::ostream& os, const FormExpr& e) { return os << to_text(e); }

}  // namespace scy::symbolic
