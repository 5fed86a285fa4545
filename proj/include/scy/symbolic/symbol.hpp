#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scy::symbolic {

/// A frame index in {1,2}, possibly barred.
struct Index {
    std::uint8_t value = 1;
    bool barred = false;

    friend auto operator<=>(const Index&, const Index&) = default;
};

inline Index idx(int v) { return Index{static_cast<std::uint8_t>(v), false}; }
inline Index bar(int v) { return Index{static_cast<std::uint8_t>(v), true}; }

/// Declared index signature of a tensor family.
struct FamilyInfo {
    std::string name;
    int upper = 0;
    std::vector<bool> lower_barred;                  // one entry per lower slot
    std::vector<std::pair<int, int>> antisymmetric;  // lower slot pairs
    bool real = false;          // conj acts by bar-flip of derivative slots
    bool differentiable = true;
};

/// Looks up a registered family; throws std::invalid_argument if unknown.
const FamilyInfo& family(const std::string& name);
bool has_family(const std::string& name);
std::vector<std::string> family_names();

/// Indexed symbol: `family^{upper}_{lower, derivs}`, optionally conjugated.
struct Symbol {
    std::string family;
    std::vector<Index> upper;
    std::vector<Index> lower;
    std::vector<Index> derivs;
    bool conjugated = false;

    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Builds a symbol and checks it against its family signature.
Symbol make_symbol(const std::string& fam, std::vector<Index> upper = {}, std::vector<Index> lower = {},
                   std::vector<Index> derivs = {}, bool conjugated = false);

/// Result of putting antisymmetric slot pairs in canonical order.
/// sign is 0 when the symbol vanishes identically.
struct CanonicalSymbol {
    int sign = 1;
    Symbol symbol;
};

CanonicalSymbol canonicalize(const Symbol& s);

Symbol conj(const Symbol& s);

/// Same symbol with one more covariant-derivative slot appended.
Symbol with_derivative(const Symbol& s, Index d);

std::string to_text(const Symbol& s);

}  // namespace scy::symbolic
