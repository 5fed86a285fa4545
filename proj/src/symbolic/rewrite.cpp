#include "scy/symbolic/rewrite.hpp"

#include <algorithm>
#include <stdexcept>

namespace scy::symbolic {

RewriteRule table_rule(std::string tag, std::map<Symbol, FormExpr> table) {
    return RewriteRule{std::move(tag), [t = std::move(table)](const Symbol& s) -> std::optional<FormExpr> {
                           auto it = t.find(s);
                           if (it == t.end()) return std::nullopt;
                           return it->second;
                       }};
}

namespace {

std::optional<std::pair<FormExpr, const RewriteRule*>> match(const Symbol& s,
                                                             const std::vector<RewriteRule>& rules) {
    // Rules are written for unflagged symbols; flagged ones go through conj.
    if (s.conjugated) {
        Symbol c = conj(s);
        for (const auto& r : rules) {
            if (auto out = r.apply(c)) return std::make_pair(conj(*out), &r);
        }
        return std::nullopt;
    }
    for (const auto& r : rules) {
        if (auto out = r.apply(s)) return std::make_pair(*out, &r);
    }
    return std::nullopt;
}

}  // namespace

FormExpr rewrite(const FormExpr& e, const std::vector<RewriteRule>& rules, RewriteStats* stats, int max_passes) {
    FormExpr cur = e;
    for (int pass = 0; pass < max_passes; ++pass) {
        bool changed = false;
        FormExpr next;
        for (const auto& [k, c] : cur.terms()) {
            bool done = false;
            for (std::size_t f = 0; f < k.factors.size() && !done; ++f) {
                const Factor& fac = k.factors[f];
                if (fac.twice_power <= 0 || fac.twice_power % 2 != 0) continue;
                auto m = match(fac.symbol, rules);
                if (!m) continue;
                std::vector<Factor> rest = k.factors;
                rest[f].twice_power -= 2;
                FormExpr pre;
                pre.add_term(c, rest, k.word);
                next += m->first * pre;
                if (stats) ++(*stats)[m->second->tag];
                done = true;
            }
            if (!done) next.add_term(c, k.factors, k.word);
            changed = changed || done;
        }
        cur = std::move(next);
        if (!changed) return cur;
    }
    throw std::runtime_error("rewrite: rules did not terminate");
}

FormExpr solve_for(const FormExpr& equation, const Symbol& target) {
    CanonicalSymbol ct = canonicalize(target);
    if (ct.sign == 0) throw std::invalid_argument("solve_for: target vanishes identically");
    Coeff lead;
    FormExpr rest;
    for (const auto& [k, c] : equation.terms()) {
        bool has = std::any_of(k.factors.begin(), k.factors.end(),
                               [&](const Factor& f) { return f.symbol == ct.symbol; });
        if (!has) {
            rest.add_term(c, k.factors, k.word);
            continue;
        }
        if (k.factors.size() != 1 || k.factors[0].twice_power != 2 || !k.word.empty()) {
            throw std::invalid_argument("solve_for: equation is not linear with numeric coefficient");
        }
        lead += c;
    }
    if (lead.is_zero()) throw std::invalid_argument("solve_for: target does not appear");
    // sign from canonicalization: target = ct.sign * ct.symbol
    return (Coeff(-ct.sign) / lead) * rest;
}

namespace {

const std::map<std::string, std::string>& background_family() {
    static const std::map<std::string, std::string> m = {
        {"alpha", "alphabg"}, {"N", "Nbg"}, {"Kb", "Kbbg"}};
    return m;
}

FormExpr frame_b(int upper, int lower) { return sym("b", {idx(upper)}, {idx(lower)}); }
FormExpr frame_a(int upper, int lower) { return sym("a", {idx(upper)}, {idx(lower)}); }

// Expands every slot of s (upper, lower, derivs in that order).
FormExpr expand_slots(const Symbol& s, const std::string& target_family) {
    std::vector<Index*> slots;
    Symbol t = s;
    t.family = target_family;
    t.conjugated = false;
    std::vector<int> kind;  // 0 upper, 1 lower, 2 barred lower
    for (auto& u : t.upper) {
        slots.push_back(&u);
        kind.push_back(0);
    }
    for (auto& l : t.lower) {
        slots.push_back(&l);
        kind.push_back(l.barred ? 2 : 1);
    }
    for (auto& d : t.derivs) {
        slots.push_back(&d);
        kind.push_back(d.barred ? 2 : 1);
    }
    std::vector<Index> original;
    for (auto* p : slots) original.push_back(*p);
    FormExpr out;
    const std::size_t n = slots.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        FormExpr term = FormExpr::constant(1);
        for (std::size_t k = 0; k < n; ++k) {
            int q = ((mask >> k) & 1) + 1;
            int orig = original[k].value;
            slots[k]->value = static_cast<std::uint8_t>(q);
            if (kind[k] == 0) term = term * frame_a(orig, q);
            if (kind[k] == 1) term = term * frame_b(q, orig);
            if (kind[k] == 2) term = term * conj(frame_b(q, orig));
        }
        out += term * FormExpr::symbol(t);
    }
    return out;
}

}  // namespace

FormExpr to_background(const FormExpr& e) {
    RewriteRule rule{"frame-change", [](const Symbol& s) -> std::optional<FormExpr> {
                         auto it = background_family().find(s.family);
                         if (it == background_family().end()) return std::nullopt;
                         return expand_slots(s, it->second);
                     }};
    return rewrite(e, {rule});
}

FormExpr volume_rewrite(const FormExpr& e) {
    const Symbol l1 = make_symbol("lambda", {}, {idx(1)});
    const Symbol l2 = make_symbol("lambda", {}, {idx(2)});
    const Symbol ef = make_symbol("eF");
    FormExpr out;
    for (const auto& [k, c] : e.terms()) {
        int p1 = 0, p2 = 0;
        std::vector<Factor> rest;
        int pf = 0;
        for (const auto& f : k.factors) {
            if (f.symbol == l1) {
                p1 = f.twice_power;
            } else if (f.symbol == l2) {
                p2 = f.twice_power;
            } else if (f.symbol == ef) {
                pf = f.twice_power;
            } else {
                rest.push_back(f);
            }
        }
        p1 += pf;
        p2 += pf;
        pf = 0;
        int t = 0;
        if (p1 > 0 && p2 > 0) t = std::min(p1, p2);
        if (p1 < 0 && p2 < 0) t = std::max(p1, p2);
        p1 -= t;
        p2 -= t;
        pf += t;
        if (p1) rest.push_back({l1, p1});
        if (p2) rest.push_back({l2, p2});
        if (pf) rest.push_back({ef, pf});
        out.add_term(c, rest, k.word);
    }
    return out;
}

FormExpr substitute_eigenframe(const FormExpr& e, bool use_volume_rewrite) {
    RewriteRule diag{"eigenframe", [](const Symbol& s) -> std::optional<FormExpr> {
                         if (s.family != "a" && s.family != "b") return std::nullopt;
                         int i = s.upper[0].value;
                         int j = s.lower[0].value;
                         if (i != j) return FormExpr();
                         int tp = s.family == "a" ? 1 : -1;
                         return sym_pow("lambda", {idx(i)}, tp);
                     }};
    FormExpr out = rewrite(e, {diag});
    return use_volume_rewrite ? volume_rewrite(out) : out;
}

}  // namespace scy::symbolic
