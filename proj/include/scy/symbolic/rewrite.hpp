#pragma once

#include "scy/symbolic/form_expr.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scy::symbolic {

/// Replaces a matching symbol by a scalar expression. Symbols carrying the
/// conjugation flag are matched through conj, so a rule only needs its
/// unconjugated form.
struct RewriteRule {
    std::string tag;
    std::function<std::optional<FormExpr>(const Symbol&)> apply;
};

/// Builds a rule from an explicit table of symbol -> replacement.
RewriteRule table_rule(std::string tag, std::map<Symbol, FormExpr> table);

/// Per-tag count of symbol replacements performed.
using RewriteStats = std::map<std::string, int>;

/// Applies rules until no factor matches. Throws std::runtime_error if the
/// system does not terminate within max_passes.
FormExpr rewrite(const FormExpr& e, const std::vector<RewriteRule>& rules, RewriteStats* stats = nullptr,
                 int max_passes = 32);

/// Solves `equation = 0` (a scalar expression linear in `target`, with a
/// numeric coefficient) for target.
FormExpr solve_for(const FormExpr& equation, const Symbol& target);

/// Frame-change and eigenframe reductions.
///
/// `to_background` rewrites every tilde-frame tensor (alpha, N, Kb) by
///   upper i -> a^i_p,  lower j -> b^q_j,  barred lower k -> conj(b^r_k),
/// giving background-frame components (alphabg, Nbg, Kbbg).
FormExpr to_background(const FormExpr& e);

/// a^i_j -> lambda_i^{1/2} delta_ij, b^i_j -> lambda_j^{-1/2} delta_ij, then
/// lambda_1 lambda_2 -> e^F wherever the product appears.
FormExpr substitute_eigenframe(const FormExpr& e, bool use_volume_rewrite = true);

/// Only the lambda_1 lambda_2 -> e^F step. Powers of e^F are first expanded
/// into lambda_1 lambda_2, then the common power is pulled back out, so the
/// result has at most one of lambda_1, lambda_2 per sign.
FormExpr volume_rewrite(const FormExpr& e);

}  // namespace scy::symbolic
