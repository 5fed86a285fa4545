#include "scy/symbolic/symbol.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace scy::symbolic {

namespace {

FamilyInfo tensor(std::string name, int upper, std::vector<bool> lower,
                  std::vector<std::pair<int, int>> anti = {}) {
    FamilyInfo f;
    f.name = std::move(name);
    f.upper = upper;
    f.lower_barred = std::move(lower);
    f.antisymmetric = std::move(anti);
    return f;
}

FamilyInfo real_scalar(std::string name, bool differentiable) {
    FamilyInfo f;
    f.name = std::move(name);
    f.real = true;
    f.differentiable = differentiable;
    return f;
}

FamilyInfo complex_scalar(std::string name) {
    FamilyInfo f;
    f.name = std::move(name);
    return f;
}

FamilyInfo frozen(FamilyInfo f) {
    f.differentiable = false;
    return f;
}

std::map<std::string, FamilyInfo> build_registry() {
    std::vector<FamilyInfo> all = {
        // moving-frame tensors of the tamed metric
        tensor("alpha", 0, {false}),
        tensor("N", 1, {true, true}, {{0, 1}}),
        tensor("R", 1, {false, false, true}),
        tensor("K", 1, {false, false, false}, {{1, 2}}),
        tensor("Kb", 1, {false, true, true}, {{1, 2}}),
        tensor("Ric", 0, {false, true}),
        tensor("T", 0, {false, true}),
        // background-frame counterparts
        frozen(tensor("alphabg", 0, {false})),
        frozen(tensor("Nbg", 1, {true, true}, {{0, 1}})),
        frozen(tensor("Kbbg", 1, {false, true, true}, {{1, 2}})),
        // frame change and Chern-difference coefficients
        frozen(tensor("a", 1, {false})),
        frozen(tensor("b", 1, {false})),
        frozen(tensor("aC", 1, {false, false})),
        // Hodge-Laplacian components of a generic 1-form
        frozen(tensor("H", 0, {false})),
        frozen(tensor("Hb", 0, {true})),
        // scalars
        real_scalar("f", true),
        real_scalar("G11", true),
        real_scalar("G22", true),
        complex_scalar("G12"),
        complex_scalar("W"),
        frozen(tensor("lambda", 0, {false})),
        real_scalar("eF", false),
        real_scalar("C", false),
        real_scalar("C0", false),
        real_scalar("C1", false),
        real_scalar("A", false),
        real_scalar("trgg", false),
        real_scalar("gradg2", false),
        real_scalar("a2", false),
    };
    // lambda is real even though it carries an index
    for (auto& f : all) {
        if (f.name == "lambda") f.real = true;
    }
    std::map<std::string, FamilyInfo> reg;
    for (auto& f : all) reg.emplace(f.name, f);
    return reg;
}

const std::map<std::string, FamilyInfo>& registry() {
    static const std::map<std::string, FamilyInfo> reg = build_registry();
    return reg;
}

void check_index(const Index& i) {
    if (i.value != 1 && i.value != 2) {
        throw std::invalid_argument("frame index out of range {1,2}");
    }
}

}  // namespace

const FamilyInfo& family(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) {
        throw std::invalid_argument("unknown symbol family: " + name);
    }
    return it->second;
}

bool has_family(const std::string& name) { return registry().count(name) != 0; }

std::vector<std::string> family_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

Symbol make_symbol(const std::string& fam, std::vector<Index> upper, std::vector<Index> lower,
                   std::vector<Index> derivs, bool conjugated) {
    const FamilyInfo& info = family(fam);
    if (static_cast<int>(upper.size()) != info.upper || lower.size() != info.lower_barred.size()) {
        throw std::invalid_argument("index arity does not match family " + fam);
    }
    for (std::size_t k = 0; k < lower.size(); ++k) {
        check_index(lower[k]);
        if (lower[k].barred != info.lower_barred[k]) {
            throw std::invalid_argument("bar pattern does not match family " + fam);
        }
    }
    for (const auto& u : upper) {
        check_index(u);
        if (u.barred) throw std::invalid_argument("barred upper index in " + fam);
    }
    for (const auto& d : derivs) check_index(d);
    if (info.real && conjugated) {
        throw std::invalid_argument("real family cannot carry a conjugation flag: " + fam);
    }
    return Symbol{fam, std::move(upper), std::move(lower), std::move(derivs), conjugated};
}

CanonicalSymbol canonicalize(const Symbol& s) {
    CanonicalSymbol out{1, s};
    for (auto [p, q] : family(s.family).antisymmetric) {
        Index& x = out.symbol.lower[p];
        Index& y = out.symbol.lower[q];
        if (x.value == y.value) {
            out.sign = 0;
            return out;
        }
        if (y.value < x.value) {
            std::swap(x, y);
            out.sign = -out.sign;
        }
    }
    return out;
}

Symbol conj(const Symbol& s) {
    Symbol out = s;
    if (family(s.family).real) {
        for (auto& d : out.derivs) d.barred = !d.barred;
    } else {
        out.conjugated = !out.conjugated;
    }
    return out;
}

Symbol with_derivative(const Symbol& s, Index d) {
    Symbol out = s;
    out.derivs.push_back(d);
    return out;
}

namespace {
std::string index_list(const std::vector<Index>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ",";
        if (v[k].barred) s += "~";
        s += std::to_string(v[k].value);
    }
    return s;
}
}  // namespace

std::string to_text(const Symbol& s) {
    std::string out = s.conjugated ? "!" : "";
    out += s.family;
    if (s.upper.empty() && s.lower.empty() && s.derivs.empty()) return out;
    out += "[" + index_list(s.upper) + ";" + index_list(s.lower);
    if (!s.derivs.empty()) out += "|" + index_list(s.derivs);
    out += "]";
    return out;
}

}  // namespace scy::symbolic
