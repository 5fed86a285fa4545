#pragma once

#include "scy/symbolic/form_expr.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace scy::identities {

using symbolic::FormExpr;

/// Deliberate corruptions used to check that the corpus detects errors.
struct Mutations {
    bool ax216_signflip = false;     // AX-216 with the torsion term negated
    bool list_volume_off = false;    // ID-LIST without lambda_1 lambda_2 -> e^F
};

/// Known tags: "AX-216-signflip", "LIST-volume-rewrite-off". Throws
/// std::invalid_argument on anything else.
void apply_mutation(Mutations& m, const std::string& tag);
std::vector<std::string> mutation_tags();

/// Imported facts, usable only by the recipes that cite them.
struct Axiom {
    std::string tag;
    std::string statement;
};
const std::vector<Axiom>& axiom_set();

struct VerificationResult {
    std::string id;
    bool pass = false;
    FormExpr residual;
    std::vector<std::string> steps;
    std::map<std::string, int> axioms_used;  // tag -> symbol replacements
    std::vector<std::string> relations_used;  // derived identities consumed
};

/// Records the derivation while a recipe runs.
class Trace {
public:
    explicit Trace(std::string id) { result_.id = std::move(id); }

    void step(const std::string& what) { result_.steps.push_back(what); }
    void axiom(const std::string& tag, int replacements);
    void relation(const std::string& id);

    /// Finishes with residual = lhs - rhs.
    VerificationResult compare(const FormExpr& lhs, const FormExpr& rhs);
    /// Finishes with an already-formed residual (e.g. summed component checks).
    VerificationResult finish(const FormExpr& residual);

private:
    VerificationResult result_;
};

struct IdentityCase {
    std::string id;
    std::string statement;
    std::vector<std::string> axioms;
    std::function<VerificationResult(const Mutations&)> recipe;
};

/// The full registry in a fixed order.
const std::vector<IdentityCase>& registry();

std::vector<std::string> list_identities();

/// Throws std::invalid_argument for an unknown id.
VerificationResult verify_identity(const std::string& id, const Mutations& m = {});

struct Summary {
    std::vector<VerificationResult> results;
    int passed = 0;
    int failed = 0;
    std::map<std::string, int> axiom_usage;  // tag -> number of cases using it
    int total_steps = 0;
};

Summary verify_all(const Mutations& m = {});
Summary verify_all(const std::vector<IdentityCase>& cases, const Mutations& m = {});

nlohmann::json to_json(const Summary& s);

}  // namespace scy::identities
