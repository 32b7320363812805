#ifndef QUADCHROMA_RULE_SYNTAX_HPP
#define QUADCHROMA_RULE_SYNTAX_HPP

// Text form of slope-interval rules:
//
//   blue=[-inf,0]                    the default slope coloring
//   blue=(-1,1);vertical=red         brackets are closed ends, parentheses open
//   red=(0,inf)                      slopes in the interval are red instead
//   blue=[-inf,2^-16]                endpoints: integers, p/q, exact decimals, 2^e, inf
//
// Endpoints are parsed to exact rationals; decimals are taken at face value
// (0.1 is 1/10), never through binary floating point.

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "analytic.hpp"
#include "geom.hpp"

namespace quadchroma {

class RuleSyntaxError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline Color parse_color(std::string_view s)
{
    s = trim(s);
    if (s == "blue") return Color::blue;
    if (s == "red") return Color::red;
    throw RuleSyntaxError("expected 'blue' or 'red', got '" + std::string(s) + "'");
}

} // namespace detail

// Parses a finite endpoint (no infinities) into an exact rational.
inline ExactRational parse_rational_literal(std::string_view text)
{
    using detail::all_digits;
    std::string_view s = detail::trim(text);
    const std::string original(s);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    try {
        ExactRational value;
        if (s.size() > 2 && s.substr(0, 2) == "2^") {
            std::string_view e = s.substr(2);
            bool neg_exp = false;
            if (!e.empty() && (e.front() == '-' || e.front() == '+')) {
                neg_exp = e.front() == '-';
                e.remove_prefix(1);
            }
            if (!all_digits(e) || e.size() > 3) throw RuleSyntaxError("bad exponent in '" + original + "'");
            const int exponent = std::stoi(std::string(e));
            if (exponent > 62) throw RuleSyntaxError("exponent out of range [-62, 62] in '" + original + "'");
            const int128 p = int128(1) << exponent;
            value = neg_exp ? ExactRational(1, p) : ExactRational(p);
        } else if (const auto slash = s.find('/'); slash != std::string_view::npos) {
            const auto num = s.substr(0, slash);
            const auto den = s.substr(slash + 1);
            if (!all_digits(num) || !all_digits(den)) throw RuleSyntaxError("bad fraction '" + original + "'");
            if (parse_int128(den) == 0) throw RuleSyntaxError("zero denominator in '" + original + "'");
            value = ExactRational(parse_int128(num), parse_int128(den));
        } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
            const auto whole = s.substr(0, dot);
            const auto frac = s.substr(dot + 1);
            if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac) || frac.size() > 18)
                throw RuleSyntaxError("bad decimal '" + original + "'");
            int128 scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            const int128 w = whole.empty() ? 0 : parse_int128(whole);
            value = ExactRational(checked_add(checked_mul(w, scale), parse_int128(frac)), scale);
        } else {
            if (!all_digits(s)) throw RuleSyntaxError("bad number '" + original + "'");
            value = ExactRational(parse_int128(s));
        }
        return negative ? ExactRational(-value.num(), value.den()) : value;
    } catch (const RuleSyntaxError&) {
        throw;
    } catch (const std::exception& e) {
        throw RuleSyntaxError("bad number '" + original + "': " + e.what());
    }
}

inline SlopeBound to_slope_bound(const ExactRational& r)
{
    if (r.num() > INT64_MAX || r.num() < -INT64_MAX || r.den() > INT64_MAX)
        throw RuleSyntaxError("endpoint " + r.str() + " does not fit 64-bit numerator/denominator");
    return SlopeBound::rational(std::int64_t(r.num()), std::int64_t(r.den()));
}

inline SlopeBound parse_slope_bound(std::string_view text)
{
    const std::string_view s = detail::trim(text);
    if (s == "inf" || s == "+inf") return SlopeBound::pos_infinity();
    if (s == "-inf") return SlopeBound::neg_infinity();
    return to_slope_bound(parse_rational_literal(s));
}

inline std::string format_slope_bound(const SlopeBound& b)
{
    if (b.kind == SlopeBound::Kind::neg_inf) return "-inf";
    if (b.kind == SlopeBound::Kind::pos_inf) return "inf";
    if (b.den == 1) return std::to_string(b.num);
    if ((b.num == 1 || b.num == -1) && (b.den & (b.den - 1)) == 0) {
        int e = 0;
        while ((std::int64_t(1) << e) != b.den) ++e;
        return std::string(b.num < 0 ? "-" : "") + "2^-" + std::to_string(e);
    }
    return std::to_string(b.num) + "/" + std::to_string(b.den);
}

inline ColorRule parse_rule(std::string_view text)
{
    std::string_view s = detail::trim(text);
    const std::string original(s);
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw RuleSyntaxError("expected '<color>=<interval>' in '" + original + "'");

    ColorRule rule;
    rule.inside = detail::parse_color(s.substr(0, eq));
    s = detail::trim(s.substr(eq + 1));
    if (s.empty() || (s.front() != '(' && s.front() != '['))
        throw RuleSyntaxError("interval must start with '(' or '[' in '" + original + "'");
    rule.lo_open = s.front() == '(';
    const auto close = s.find_first_of(")]");
    if (close == std::string_view::npos) throw RuleSyntaxError("unterminated interval in '" + original + "'");
    rule.hi_open = s[close] == ')';
    const std::string_view body = s.substr(1, close - 1);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos)
        throw RuleSyntaxError("interval needs exactly two endpoints in '" + original + "'");
    rule.lo = parse_slope_bound(body.substr(0, comma));
    rule.hi = parse_slope_bound(body.substr(comma + 1));

    std::string_view tail = detail::trim(s.substr(close + 1));
    if (!tail.empty()) {
        if (tail.front() == ';' || tail.front() == ',') tail = detail::trim(tail.substr(1));
        constexpr std::string_view key = "vertical=";
        if (tail.substr(0, key.size()) != key) throw RuleSyntaxError("unexpected trailing text in '" + original + "'");
        rule.vertical = detail::parse_color(tail.substr(key.size()));
    }
    try {
        rule.validate();
    } catch (const std::invalid_argument& e) {
        throw RuleSyntaxError(std::string(e.what()) + " in '" + original + "'");
    }
    return rule;
}

inline std::string format_rule(const ColorRule& rule)
{
    std::string out = std::string(to_string(rule.inside)) + "=" + (rule.lo_open ? "(" : "[") + format_slope_bound(rule.lo) +
                      "," + format_slope_bound(rule.hi) + (rule.hi_open ? ")" : "]");
    if (rule.vertical != Color::blue) out += ";vertical=" + std::string(to_string(rule.vertical));
    return out;
}

// One rule per line; blank lines and '#' comments are skipped. Errors carry
// the 1-based line number.
inline std::vector<ColorRule> parse_rules_text(const std::string& text)
{
    std::vector<ColorRule> rules;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        try {
            rules.push_back(parse_rule(line));
        } catch (const RuleSyntaxError& e) {
            throw RuleSyntaxError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (rules.empty()) throw RuleSyntaxError("rules file contains no rules");
    return rules;
}

// "lo:hi:steps" -> the default rule followed by blue=[-inf,t] for `steps`
// evenly spaced exact upper endpoints t from lo to hi.
inline std::vector<ColorRule> grid_rules(std::string_view spec)
{
    const auto c1 = spec.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw RuleSyntaxError("grid must be lo:hi:steps, got '" + std::string(spec) + "'");
    const ExactRational lo = parse_rational_literal(spec.substr(0, c1));
    const ExactRational hi = parse_rational_literal(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view steps_text = detail::trim(spec.substr(c2 + 1));
    if (!detail::all_digits(steps_text) || steps_text.size() > 6)
        throw RuleSyntaxError("grid steps must be a positive integer");
    const int steps = std::stoi(std::string(steps_text));
    if (steps < 1) throw RuleSyntaxError("grid steps must be a positive integer");
    if (hi < lo) throw RuleSyntaxError("grid lower end exceeds upper end");

    std::vector<ColorRule> rules{ColorRule::chi_slope()};
    for (int i = 0; i < steps; ++i) {
        const ExactRational t = steps == 1 ? lo : lo + (hi - lo) * ExactRational(i, steps - 1);
        rules.push_back(ColorRule::blue_interval(SlopeBound::neg_infinity(), false, to_slope_bound(t), false));
    }
    return rules;
}

} // namespace quadchroma

#endif
