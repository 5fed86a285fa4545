#include "scy/symbolic/text_format.hpp"

#include <stdexcept>

namespace scy::symbolic {

namespace {

std::string power_text(int twice) {
    if (twice % 2 == 0) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

std::string term_text(const MonomialKey& k, const Coeff& c) {
    std::string s = c.str();
    for (const auto& f : k.factors) {
        s += " * " + to_text(f.symbol);
        if (f.twice_power != 2) s += "**" + power_text(f.twice_power);
    }
    for (Gen g : k.word) s += " ^ " + gen_name(g);
    return s;
}

std::string join(const FormExpr& e, const std::string& sep) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : e.terms()) {
        if (!first) out += sep;
        out += term_text(k, c);
        first = false;
    }
    return out;
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t p = s.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, p - start));
        start = p + sep.size();
    }
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<Index> parse_indices(const std::string& s) {
    std::vector<Index> out;
    if (s.empty()) return out;
    for (const auto& tok : split(s, ",")) {
        std::string t = trim(tok);
        bool barred = !t.empty() && t[0] == '~';
        if (barred) t.erase(0, 1);
        if (t != "1" && t != "2") throw std::invalid_argument("bad index: " + tok);
        out.push_back(Index{static_cast<std::uint8_t>(t[0] - '0'), barred});
    }
    return out;
}

Factor parse_factor(const std::string& text) {
    std::string t = trim(text);
    int twice = 2;
    std::size_t pw = t.find("**");
    if (pw != std::string::npos) {
        Rational r;
        std::string p = t.substr(pw + 2);
        std::size_t slash = p.find('/');
        if (slash == std::string::npos) {
            r = Rational(std::stoll(p));
        } else {
            r = Rational(std::stoll(p.substr(0, slash)), std::stoll(p.substr(slash + 1)));
        }
        Rational tw = r * Rational(2);
        if (tw.denominator() != 1) throw std::invalid_argument("power must be a half-integer: " + text);
        twice = static_cast<int>(tw.numerator());
        t = t.substr(0, pw);
    }
    bool conjugated = !t.empty() && t[0] == '!';
    if (conjugated) t.erase(0, 1);
    std::string fam = t;
    std::vector<Index> upper, lower, derivs;
    std::size_t br = t.find('[');
    if (br != std::string::npos) {
        if (t.back() != ']') throw std::invalid_argument("unterminated index list: " + text);
        fam = t.substr(0, br);
        std::string inner = t.substr(br + 1, t.size() - br - 2);
        std::string d;
        std::size_t bar_pos = inner.find('|');
        if (bar_pos != std::string::npos) {
            d = inner.substr(bar_pos + 1);
            inner = inner.substr(0, bar_pos);
        }
        std::size_t semi = inner.find(';');
        if (semi == std::string::npos) throw std::invalid_argument("missing ';' in " + text);
        upper = parse_indices(inner.substr(0, semi));
        lower = parse_indices(inner.substr(semi + 1));
        derivs = parse_indices(d);
    }
    return Factor{make_symbol(fam, upper, lower, derivs, conjugated), twice};
}

Gen parse_gen(const std::string& text) {
    std::string t = trim(text);
    for (Gen g = 0; g < kGenerators; ++g) {
        if (gen_name(g) == t) return g;
    }
    throw std::invalid_argument("unknown generator: " + text);
}

}  // namespace

std::string to_text(const FormExpr& e) { return join(e, " + "); }

std::string to_text_multiline(const FormExpr& e) { return join(e, "\n + "); }

FormExpr parse_expr(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty expression");
    if (t == "0") return FormExpr();
    std::vector<Monomial> raw;
    for (const auto& term_raw : split(t, " + ")) {
        std::string term = trim(term_raw);
        auto parts = split(term, " ^ ");
        auto scal = split(parts[0], " * ");
        Monomial m;
        m.coeff = parse_coeff(trim(scal[0]));
        for (std::size_t k = 1; k < scal.size(); ++k) m.factors.push_back(parse_factor(scal[k]));
        for (std::size_t k = 1; k < parts.size(); ++k) m.word.push_back(parse_gen(parts[k]));
        raw.push_back(std::move(m));
    }
    return FormExpr(raw);
}

}  // namespace scy::symbolic
