#ifndef QUADCHROMA_GEOM_HPP
#define QUADCHROMA_GEOM_HPP

// Exact planar predicates and slope-interval edge colorings.
//
// All predicates run in integer arithmetic. Lattice coordinates are bounded by
// kMaxLatticeCoord so every orientation determinant fits in a signed 128-bit
// integer; dyadic points are reduced to integer numerators at a common scale.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "int128.hpp"

namespace quadchroma {

// |coordinate| <= 2^62 - 1 keeps (q-p) x (r-p) strictly inside the int128 range.
inline constexpr std::int64_t kMaxLatticeCoord = (std::int64_t(1) << 62) - 1;
inline constexpr int kMaxDyadicScale = 53;

struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

inline LatticePoint make_lattice_point(std::int64_t x, std::int64_t y)
{
    if (x > kMaxLatticeCoord || x < -kMaxLatticeCoord || y > kMaxLatticeCoord || y < -kMaxLatticeCoord)
        throw std::out_of_range("lattice coordinate outside +-(2^62-1): (" + std::to_string(x) + ", " +
                                std::to_string(y) + ")");
    return {x, y};
}

// The point (nx / 2^k, ny / 2^k) of the unit square.
struct DyadicPoint {
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    int k = 0;

    friend constexpr bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
};

inline DyadicPoint make_dyadic_point(std::int64_t nx, std::int64_t ny, int k)
{
    if (k < 0 || k > kMaxDyadicScale) throw std::out_of_range("dyadic scale must lie in [0, 53]");
    const std::int64_t one = std::int64_t(1) << k;
    if (nx < 0 || ny < 0 || nx > one || ny > one)
        throw std::out_of_range("dyadic numerators must lie in [0, 2^k]");
    return {nx, ny, k};
}

// Numerators of p at scale `scale` (scale >= p.k), as a lattice point.
constexpr LatticePoint at_scale(const DyadicPoint& p, int scale)
{
    const int shift = scale - p.k;
    return {p.nx << shift, p.ny << shift};
}

// ---------------------------------------------------------------------------
// Orientation and crossings

constexpr int orient(const LatticePoint& p, const LatticePoint& q, const LatticePoint& r)
{
    const int128 det = int128(q.x - p.x) * int128(r.y - p.y) - int128(q.y - p.y) * int128(r.x - p.x);
    return sign_of(det);
}

constexpr int orient(const DyadicPoint& p, const DyadicPoint& q, const DyadicPoint& r)
{
    int scale = p.k > q.k ? p.k : q.k;
    scale = scale > r.k ? scale : r.k;
    return orient(at_scale(p, scale), at_scale(q, scale), at_scale(r, scale));
}

// True iff the open segments ab and cd share a point. Touching endpoints and
// collinear overlaps are not crossings.
template <class Point>
constexpr bool segments_cross_properly(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const int abc = orient(a, b, c);
    const int abd = orient(a, b, d);
    const int cda = orient(c, d, a);
    const int cdb = orient(c, d, b);
    return abc * abd < 0 && cda * cdb < 0;
}

// ---------------------------------------------------------------------------
// Four-point classification

struct QuadClass {
    enum class Kind : std::uint8_t { degenerate, concave, convex };

    Kind kind = Kind::degenerate;
    // For convex quads: indices into the classified array forming the two
    // properly crossing diagonals. Unused otherwise.
    std::array<std::uint8_t, 2> diag_a{0, 0};
    std::array<std::uint8_t, 2> diag_b{0, 0};

    constexpr bool convex() const { return kind == Kind::convex; }

    friend constexpr bool operator==(const QuadClass&, const QuadClass&) = default;
};

constexpr QuadClass classify_quad(const std::array<LatticePoint, 4>& s)
{
    QuadClass out;
    const auto& [a, b, c, d] = s;
    if (a == b || a == c || a == d || b == c || b == d || c == d) return out;

    const int abc = orient(a, b, c);
    const int abd = orient(a, b, d);
    const int acd = orient(a, c, d);
    const int bcd = orient(b, c, d);
    if (abc == 0 || abd == 0 || acd == 0 || bcd == 0) return out;

    // Each pairing's proper-crossing test expressed through the four triple
    // orientations (cyclic rotations keep the sign, transpositions flip it).
    if (abc == -abd && acd == -bcd) {
        out.kind = QuadClass::Kind::convex;
        out.diag_a = {0, 1};
        out.diag_b = {2, 3};
    } else if (abc == acd && abd == bcd) {
        out.kind = QuadClass::Kind::convex;
        out.diag_a = {0, 2};
        out.diag_b = {1, 3};
    } else if (abd == -acd && abc == -bcd) {
        out.kind = QuadClass::Kind::convex;
        out.diag_a = {0, 3};
        out.diag_b = {1, 2};
    } else {
        out.kind = QuadClass::Kind::concave;
    }
    return out;
}

inline QuadClass classify_quad(const std::array<DyadicPoint, 4>& s)
{
    int scale = 0;
    for (const auto& p : s) scale = p.k > scale ? p.k : scale;
    return classify_quad(std::array<LatticePoint, 4>{at_scale(s[0], scale), at_scale(s[1], scale),
                                                     at_scale(s[2], scale), at_scale(s[3], scale)});
}

// ---------------------------------------------------------------------------
// Colors and slope-interval rules

enum class Color : std::uint8_t { red, blue };

constexpr Color opposite(Color c) { return c == Color::red ? Color::blue : Color::red; }

inline const char* to_string(Color c) { return c == Color::red ? "red" : "blue"; }

// An interval endpoint: -inf, +inf, or a reduced rational num/den with den > 0.
struct SlopeBound {
    enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

    Kind kind = Kind::finite;
    std::int64_t num = 0;
    std::int64_t den = 1;

    static constexpr SlopeBound neg_infinity() { return {Kind::neg_inf, 0, 1}; }
    static constexpr SlopeBound pos_infinity() { return {Kind::pos_inf, 0, 1}; }
    static SlopeBound rational(std::int64_t num, std::int64_t den = 1)
    {
        if (den == 0) throw std::invalid_argument("slope bound with zero denominator");
        int128 n = num, d = den;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const int128 g = gcd128(n, d);
        n /= g;
        d /= g;
        if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
            throw std::out_of_range("slope bound does not fit 64-bit numerator/denominator");
        return {Kind::finite, std::int64_t(n), std::int64_t(d)};
    }

    constexpr bool finite() const { return kind == Kind::finite; }

    friend constexpr bool operator==(const SlopeBound&, const SlopeBound&) = default;
};

// Three-way comparison of two bounds; -1, 0 or +1.
constexpr int compare(const SlopeBound& a, const SlopeBound& b)
{
    auto rank = [](SlopeBound::Kind k) { return k == SlopeBound::Kind::neg_inf ? 0 : k == SlopeBound::Kind::finite ? 1 : 2; };
    if (rank(a.kind) != rank(b.kind)) return rank(a.kind) < rank(b.kind) ? -1 : 1;
    if (!a.finite()) return 0;
    return sign_of(int128(a.num) * b.den - int128(b.num) * a.den);
}

// A segment whose slope lies in the interval gets `inside`, any other
// non-vertical segment gets the opposite color, and vertical segments get
// `vertical`.
struct ColorRule {
    SlopeBound lo = SlopeBound::neg_infinity();
    SlopeBound hi = SlopeBound::pos_infinity();
    bool lo_open = false;
    bool hi_open = false;
    Color vertical = Color::blue;
    Color inside = Color::blue;

    // Red iff the slope is strictly positive; horizontal and vertical edges are blue.
    static ColorRule chi_slope()
    {
        return {SlopeBound::neg_infinity(), SlopeBound::rational(0), false, false, Color::blue, Color::blue};
    }

    static ColorRule blue_interval(SlopeBound lo, bool lo_open, SlopeBound hi, bool hi_open,
                                   Color vertical = Color::blue)
    {
        ColorRule r{lo, hi, lo_open, hi_open, vertical, Color::blue};
        r.validate();
        return r;
    }

    void validate() const
    {
        if (lo.kind == SlopeBound::Kind::pos_inf || hi.kind == SlopeBound::Kind::neg_inf)
            throw std::invalid_argument("interval endpoints out of order (lower=+inf or upper=-inf)");
        if (compare(lo, hi) > 0) throw std::invalid_argument("interval lower endpoint exceeds upper endpoint");
        if (lo.finite() && lo.den <= 0) throw std::invalid_argument("non-positive denominator");
        if (hi.finite() && hi.den <= 0) throw std::invalid_argument("non-positive denominator");
    }

    friend constexpr bool operator==(const ColorRule&, const ColorRule&) = default;
};

// Swap red and blue everywhere.
constexpr ColorRule complement(ColorRule rule)
{
    rule.inside = opposite(rule.inside);
    rule.vertical = opposite(rule.vertical);
    return rule;
}

// Whether the finite slope dy/dx (dx > 0) lies in the rule's interval.
constexpr bool slope_in_interval(int128 dy, int128 dx, const ColorRule& rule)
{
    if (rule.lo.finite()) {
        const int s = sign_of(dy * rule.lo.den - int128(rule.lo.num) * dx);
        if (s < 0 || (s == 0 && rule.lo_open)) return false;
    }
    if (rule.hi.finite()) {
        const int s = sign_of(dy * rule.hi.den - int128(rule.hi.num) * dx);
        if (s > 0 || (s == 0 && rule.hi_open)) return false;
    }
    return true;
}

constexpr Color slope_color(const LatticePoint& p, const LatticePoint& q, const ColorRule& rule)
{
    int128 dx = int128(q.x) - p.x;
    int128 dy = int128(q.y) - p.y;
    if (dx == 0) return rule.vertical;
    if (dx < 0) {
        dx = -dx;
        dy = -dy;
    }
    return slope_in_interval(dy, dx, rule) ? rule.inside : opposite(rule.inside);
}

inline Color slope_color(const DyadicPoint& p, const DyadicPoint& q, const ColorRule& rule)
{
    const int scale = p.k > q.k ? p.k : q.k;
    return slope_color(at_scale(p, scale), at_scale(q, scale), rule);
}

// Whether the segment's slope sits exactly on a finite endpoint of the rule.
constexpr bool slope_on_boundary(const LatticePoint& p, const LatticePoint& q, const ColorRule& rule)
{
    int128 dx = int128(q.x) - p.x;
    int128 dy = int128(q.y) - p.y;
    if (dx == 0) return false;
    if (dx < 0) {
        dx = -dx;
        dy = -dy;
    }
    auto on = [&](const SlopeBound& b) { return b.finite() && dy * b.den == int128(b.num) * dx; };
    return on(rule.lo) || on(rule.hi);
}

template <class Point>
constexpr bool diagonals_same_color(const std::array<Point, 4>& s, const QuadClass& cls, const ColorRule& rule)
{
    return slope_color(s[cls.diag_a[0]], s[cls.diag_a[1]], rule) ==
           slope_color(s[cls.diag_b[0]], s[cls.diag_b[1]], rule);
}

template <class Point>
constexpr bool is_mono_crossing_quad(const std::array<Point, 4>& s, const ColorRule& rule)
{
    const QuadClass cls = classify_quad(s);
    return cls.convex() && diagonals_same_color(s, cls, rule);
}

} // namespace quadchroma

#endif
