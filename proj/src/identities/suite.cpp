#include "scy/identities/identity_suite.hpp"
#include "scy/symbolic/text_format.hpp"

#include "common.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace scy::identities {

void Trace::axiom(const std::string& tag, int replacements) { result_.axioms_used[tag] += replacements; }

void Trace::relation(const std::string& id) {
    auto& r = result_.relations_used;
    if (std::find(r.begin(), r.end(), id) == r.end()) r.push_back(id);
}

VerificationResult Trace::compare(const FormExpr& lhs, const FormExpr& rhs) {
    step("compare with the stated right-hand side");
    return finish(lhs - rhs);
}

VerificationResult Trace::finish(const FormExpr& residual) {
    result_.residual = residual;
    result_.pass = residual.is_zero();
    return result_;
}

void apply_mutation(Mutations& m, const std::string& tag) {
    if (tag == "AX-216-signflip") {
        m.ax216_signflip = true;
    } else if (tag == "LIST-volume-rewrite-off") {
        m.list_volume_off = true;
    } else {
        throw std::invalid_argument("unknown mutation: " + tag);
    }
}

std::vector<std::string> mutation_tags() { return {"AX-216-signflip", "LIST-volume-rewrite-off"}; }

const std::vector<Axiom>& axiom_set() {
    static const std::vector<Axiom> axioms = {
        {"AX-COMM", "R^j_{i2~2} = Ric_{i~j} - R^j_{i1~1} - 4 sum (N^q_{~p~j} conj N^p_{~q~i} + N^p_{~q~j} conj N^i_{~p~q})"},
        {"AX-216", "R^j_{ki~i} = R^j_{ik~i} + 4 sum_p N^j_{~p~i} conj N^p_{~k~i}, k != i"},
        {"AX-L44", "N~^i_{~j~k,p} = Nbg^l_{~r~s,u} a^i_l conj b^r_j conj b^s_k b^u_p + Nbg^t_{~r~s} conj b^r_j conj b^s_k aC^i_{up} a^u_t"},
    };
    return axioms;
}

const std::vector<IdentityCase>& registry() {
    using namespace detail;
    static const std::vector<IdentityCase> cases = {
        {"ID-STARTAB", "star table is an isometry: <e_I, e_J> = delta_IJ", {}, verify_startab},
        {"ID-STARSQ", "** = (-1)^k and conj * = * conj", {}, verify_starsq},
        {"ID-GLZ", "dd^c f in terms of f_{i~j} and the torsion", {}, verify_glz},
        {"ID-LAPFORM", "2 w~ ^ dd^c f / w~^2 = sum f_{i~i}", {}, verify_lapform},
        {"ID-NULL", "dd alpha_i = 0 expanded in components", {}, verify_null},
        {"ID-COMM1", "alpha_{i,k~l} = alpha_{i,~lk} + alpha_j R^j_{ik~l}", {}, verify_comm1},
        {"ID-COMM2", "alpha_{i,~l~k} = alpha_{i,~k~l} - 2(alpha_j Kb^j_{i~k~l} + alpha_{i,j} N^j_{~k~l})", {},
         verify_comm2},
        {"ID-LAPL", "Laplacian of |alpha|^2", {}, verify_lapl},
        {"ID-LAPLCOMM", "Laplacian of |alpha|^2 after commuting derivatives", {"AX-COMM"}, verify_laplcomm},
        {"ID-DA11", "(1,1)-part of da and |w~ - w^(1,1)|^2", {}, verify_da11},
        {"ID-LONGA", "g~(Delta a, a) = 2Re g~(Delta alpha, conj alpha)", {}, verify_longa},
        {"ID-STAROMEGA", "*w = tr(w) w~ - w + 2 w^(2,0+0,2)", {}, verify_staromega},
        {"ID-HODGECHAIN", "d*w = -2 d^c tr w - 2 *d w^(2,0+0,2) + *dw", {}, verify_hodgechain},
        {"ID-FIRST", "*alpha, d*alpha and dd*alpha", {}, verify_first},
        {"ID-LAST", "d alpha and *d alpha", {}, verify_last},
        {"ID-LOST", "(2,1)-part of d*d alpha", {}, verify_lost},
        {"ID-LOST2", "(1,2)-part of d*d alpha", {}, verify_lost2},
        {"ID-DOLORE1", "(1,0)-part of Delta alpha = 2 alpha_{k,~ii} t^k", {"AX-216"}, verify_dolore1},
        {"ID-DOLORE2", "(0,1)-part of Delta alpha", {}, verify_dolore2},
        {"ID-LIST", "alpha_j conj alpha_i N conj N in the eigenframe", {}, verify_list},
        {"ID-LAPTERMS", "Laplacian lower-order terms in the eigenframe", {"AX-L44"}, verify_lapterms},
        {"ID-VIER-ALG", "1/2 g~(Delta a, a) in components", {}, verify_vier_alg},
        {"ID-2D", "tr_g~ g = e^{-F} tr(adj g~) in dimension 2", {}, verify_2d},
        {"ID-MAXPRIN", "choice A = C1 (C0 + 1) in the maximum-principle combination", {}, verify_maxprin},
    };
    return cases;
}

std::vector<std::string> list_identities() {
    std::vector<std::string> ids;
    for (const auto& c : registry()) ids.push_back(c.id);
    return ids;
}

VerificationResult verify_identity(const std::string& id, const Mutations& m) {
    for (const auto& c : registry()) {
        if (c.id == id) return c.recipe(m);
    }
    throw std::invalid_argument("unknown identity: " + id);
}

Summary verify_all(const Mutations& m) { return verify_all(registry(), m); }

Summary verify_all(const std::vector<IdentityCase>& cases, const Mutations& m) {
    Summary s;
    for (const auto& c : cases) {
        VerificationResult r = c.recipe(m);
        (r.pass ? s.passed : s.failed)++;
        s.total_steps += static_cast<int>(r.steps.size());
        for (const auto& [tag, n] : r.axioms_used) {
            if (n > 0) s.axiom_usage[tag]++;
        }
        s.results.push_back(std::move(r));
    }
    return s;
}

nlohmann::json to_json(const Summary& s) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& r : s.results) {
        cases.push_back({{"id", r.id},
                         {"pass", r.pass},
                         {"steps", r.steps},
                         {"axioms_used", r.axioms_used},
                         {"relations_used", r.relations_used},
                         {"residual_text", symbolic::to_text(r.residual)}});
    }
    return {{"passed", s.passed},
            {"failed", s.failed},
            {"total_steps", s.total_steps},
            {"axiom_usage", s.axiom_usage},
            {"cases", cases}};
}

}  // namespace scy::identities
