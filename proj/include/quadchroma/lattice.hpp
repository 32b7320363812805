#ifndef QUADCHROMA_LATTICE_HPP
#define QUADCHROMA_LATTICE_HPP

// Exact census of 4-point configurations on integer grids.
//
// Q_{w,h} is the grid {0..w} x {0..h}; P_m = Q_{m,m}. Points are indexed in
// row-major order (index = y * (w + 1) + x) and 4-subsets are enumerated as
// increasing index tuples i < j < k < l. Work is split into chunks keyed by
// the leading index (or the leading/trailing pair for exact-bounding-box
// scans) and reduced in chunk order, so totals never depend on thread count.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "geom.hpp"
#include "int128.hpp"
#include "parallel.hpp"

namespace quadchroma {

inline constexpr std::int64_t kMaxEnumerationPoints = 1200;

class SizeGuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct GridBox {
    std::int64_t w = 1;
    std::int64_t h = 1;

    std::int64_t point_count() const { return (w + 1) * (h + 1); }
};

// Census of strictly convex quadruples whose bounding box is exactly Q_{w,h}.
//
// The two-corner class is split by which opposite corner pair is present:
// c2/d2 for bottom-left + top-right, c2_anti/d2_anti for top-left +
// bottom-right; "c" means the other two points straddle the corner diagonal's
// supporting line, "d" means they lie on the same side. s2 counts two-corner
// sets whose corners share a side.
struct BoxCounts {
    count_t a_total = 0;
    std::array<count_t, 5> a_by_corners{};
    count_t c2 = 0;
    count_t d2 = 0;
    count_t c2_anti = 0;
    count_t d2_anti = 0;
    count_t s2 = 0;
    count_t convex_total = 0;

    BoxCounts& operator+=(const BoxCounts& o)
    {
        a_total += o.a_total;
        for (std::size_t i = 0; i < a_by_corners.size(); ++i) a_by_corners[i] += o.a_by_corners[i];
        c2 += o.c2;
        d2 += o.d2;
        c2_anti += o.c2_anti;
        d2_anti += o.d2_anti;
        s2 += o.s2;
        convex_total += o.convex_total;
        return *this;
    }

    friend bool operator==(const BoxCounts&, const BoxCounts&) = default;
};

struct GridCounts {
    std::int64_t m = 0;
    count_t total_quadruples = 0;
    count_t convex = 0;
    count_t mono = 0;

    friend bool operator==(const GridCounts&, const GridCounts&) = default;
};

// Convex and monochromatic-crossing counts over all 4-subsets of a grid.
struct ContainedCounts {
    count_t convex = 0;
    count_t mono = 0;

    ContainedCounts& operator+=(const ContainedCounts& o)
    {
        convex += o.convex;
        mono += o.mono;
        return *this;
    }

    friend bool operator==(const ContainedCounts&, const ContainedCounts&) = default;
};

enum class GridMethod { direct, per_box };

namespace detail {

inline void check_enumeration_size(std::int64_t w, std::int64_t h)
{
    if (w > kMaxEnumerationPoints || h > kMaxEnumerationPoints || (w + 1) * (h + 1) > kMaxEnumerationPoints)
        throw SizeGuardError("grid " + std::to_string(w) + "x" + std::to_string(h) + " has " +
                             std::to_string((w + 1) * (h + 1)) + " points; enumeration is limited to " +
                             std::to_string(kMaxEnumerationPoints));
}

inline std::vector<LatticePoint> grid_points(std::int64_t w, std::int64_t h)
{
    std::vector<LatticePoint> pts;
    pts.reserve(std::size_t((w + 1) * (h + 1)));
    for (std::int64_t y = 0; y <= h; ++y)
        for (std::int64_t x = 0; x <= w; ++x) pts.push_back({x, y});
    return pts;
}

} // namespace detail

// Number of 4-subsets the exact-bounding-box scan of Q_{w,h} visits.
inline count_t box_scan_size(const GridBox& box)
{
    const std::int64_t row = box.w + 1;
    count_t total = 0;
    for (std::int64_t i = 0; i < row; ++i)
        for (std::int64_t l = box.h * row; l < box.h * row + row; ++l) total += binomial(l - i - 1, 2);
    return total;
}

inline BoxCounts count_box(const GridBox& box, const ColorRule& rule, unsigned threads = 0)
{
    if (box.w < 1 || box.h < 1) throw std::invalid_argument("count_box requires w >= 1 and h >= 1");
    detail::check_enumeration_size(box.w, box.h);
    const std::int64_t w = box.w;
    const std::int64_t h = box.h;
    const std::int64_t row = w + 1;
    const auto pts = detail::grid_points(w, h);
    const LatticePoint bl{0, 0}, tr{w, h}, tl{0, h}, br{w, 0};

    auto is_corner = [&](const LatticePoint& p) { return (p.x == 0 || p.x == w) && (p.y == 0 || p.y == h); };

    // The smallest index of an exact-bbox set lies in row 0 and the largest in row h.
    const std::size_t n_chunks = std::size_t(row * row);
    auto chunks = run_chunks<BoxCounts>(n_chunks, threads, [&](std::size_t chunk) {
        BoxCounts local;
        const std::int64_t i = std::int64_t(chunk) / row;
        const std::int64_t l = h * row + std::int64_t(chunk) % row;
        const LatticePoint& pi = pts[std::size_t(i)];
        const LatticePoint& pl = pts[std::size_t(l)];
        for (std::int64_t j = i + 1; j < l; ++j) {
            const LatticePoint& pj = pts[std::size_t(j)];
            for (std::int64_t k = j + 1; k < l; ++k) {
                const LatticePoint& pk = pts[std::size_t(k)];
                const std::int64_t min_x = std::min(std::min(pi.x, pj.x), std::min(pk.x, pl.x));
                const std::int64_t max_x = std::max(std::max(pi.x, pj.x), std::max(pk.x, pl.x));
                if (min_x != 0 || max_x != w) continue;

                const std::array<LatticePoint, 4> s{pi, pj, pk, pl};
                const QuadClass cls = classify_quad(s);
                if (!cls.convex()) continue;
                ++local.convex_total;
                if (!diagonals_same_color(s, cls, rule)) continue;
                ++local.a_total;

                std::array<LatticePoint, 4> corners{};
                std::array<LatticePoint, 4> rest{};
                int n_corners = 0;
                int n_rest = 0;
                for (const auto& p : s) {
                    if (is_corner(p))
                        corners[std::size_t(n_corners++)] = p;
                    else
                        rest[std::size_t(n_rest++)] = p;
                }
                ++local.a_by_corners[std::size_t(n_corners)];
                if (n_corners != 2) continue;

                const bool main_pair = (corners[0] == bl && corners[1] == tr) || (corners[0] == tr && corners[1] == bl);
                const bool anti_pair = (corners[0] == tl && corners[1] == br) || (corners[0] == br && corners[1] == tl);
                if (!main_pair && !anti_pair) {
                    ++local.s2;
                    continue;
                }
                const bool straddle = orient(corners[0], corners[1], rest[0]) * orient(corners[0], corners[1], rest[1]) < 0;
                if (main_pair)
                    ++(straddle ? local.c2 : local.d2);
                else
                    ++(straddle ? local.c2_anti : local.d2_anti);
            }
        }
        return local;
    });

    BoxCounts total;
    for (const auto& c : chunks) total += c;
    return total;
}

// Convex and monochromatic counts over every 4-subset of Q_{w,h}, any bounding
// box. Grids with w < 0 or h < 0 are empty.
inline ContainedCounts census_contained(const GridBox& box, const ColorRule& rule, unsigned threads = 0)
{
    if (box.w < 0 || box.h < 0) return {};
    detail::check_enumeration_size(box.w, box.h);
    const auto pts = detail::grid_points(box.w, box.h);
    const std::size_t n = pts.size();
    if (n < 4) return {};

    auto chunks = run_chunks<ContainedCounts>(n - 3, threads, [&](std::size_t i) {
        ContainedCounts local;
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    const std::array<LatticePoint, 4> s{pts[i], pts[j], pts[k], pts[l]};
                    const QuadClass cls = classify_quad(s);
                    if (!cls.convex()) continue;
                    ++local.convex;
                    if (diagonals_same_color(s, cls, rule)) ++local.mono;
                }
        return local;
    });

    ContainedCounts total;
    for (const auto& c : chunks) total += c;
    return total;
}

inline count_t count_box_contained(const GridBox& box, const ColorRule& rule, unsigned threads = 0)
{
    return census_contained(box, rule, threads).mono;
}

// Exact-bounding-box counts by inclusion-exclusion over the set of sides a
// 4-subset is allowed to miss. Dropping the left or right side shrinks the
// width by one, dropping the bottom or top shrinks the height; counts are
// translation invariant, so each term is a contained count on a smaller grid.
inline ContainedCounts count_box_ie_census(const GridBox& box, const ColorRule& rule, unsigned threads = 0)
{
    if (box.w < 1 || box.h < 1) throw std::invalid_argument("count_box_ie requires w >= 1 and h >= 1");
    detail::check_enumeration_size(box.w, box.h);
    // Terms depend only on (#vertical sides dropped, #horizontal sides dropped).
    ContainedCounts total;
    for (int dw = 0; dw <= 2; ++dw) {
        for (int dh = 0; dh <= 2; ++dh) {
            const count_t multiplicity = binomial(2, dw) * binomial(2, dh);
            const count_t sign = ((dw + dh) % 2 == 0) ? 1 : -1;
            const ContainedCounts term = census_contained({box.w - dw, box.h - dh}, rule, threads);
            total.convex += sign * multiplicity * term.convex;
            total.mono += sign * multiplicity * term.mono;
        }
    }
    return total;
}

inline count_t count_box_ie(const GridBox& box, const ColorRule& rule, unsigned threads = 0)
{
    return count_box_ie_census(box, rule, threads).mono;
}

inline GridCounts count_grid(std::int64_t m, const ColorRule& rule, GridMethod method, unsigned threads = 0)
{
    if (m < 1) throw std::invalid_argument("count_grid requires m >= 1");
    detail::check_enumeration_size(m, m);
    GridCounts out;
    out.m = m;
    out.total_quadruples = binomial((m + 1) * (m + 1), 4);
    if (method == GridMethod::direct) {
        const ContainedCounts c = census_contained({m, m}, rule, threads);
        out.convex = c.convex;
        out.mono = c.mono;
        return out;
    }
    // Q_{w,h} has (m-w+1)(m-h+1) placements inside P_m. Boxes with w = 0 or
    // h = 0 hold only collinear sets and contribute nothing.
    for (std::int64_t w = 1; w <= m; ++w) {
        for (std::int64_t h = 1; h <= m; ++h) {
            const BoxCounts b = count_box({w, h}, rule, threads);
            const count_t placements = count_t(m - w + 1) * count_t(m - h + 1);
            out.convex += placements * b.convex_total;
            out.mono += placements * b.a_total;
        }
    }
    return out;
}

inline count_t grid_scan_size(std::int64_t m, GridMethod method)
{
    if (method == GridMethod::direct) return binomial((m + 1) * (m + 1), 4);
    count_t total = 0;
    for (std::int64_t w = 1; w <= m; ++w)
        for (std::int64_t h = 1; h <= m; ++h) total += box_scan_size({w, h});
    return total;
}

// ---------------------------------------------------------------------------
// Lattice points in a triangle

// The point (x_num / den, y_num / den).
struct RationalPoint {
    std::int64_t x_num = 0;
    std::int64_t y_num = 0;
    std::int64_t den = 1;
};

inline constexpr std::int64_t kMaxTriangleNumerator = std::int64_t(1) << 40;
inline constexpr std::int64_t kMaxTriangleDenominator = std::int64_t(1) << 20;

namespace detail {

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Sign of orient(a, b, (X, Y)) with rational a, b and integer X, Y, scaled by
// the positive factor a.den^2 * b.den.
constexpr int edge_sign(const RationalPoint& a, const RationalPoint& b, std::int64_t X, std::int64_t Y)
{
    const int128 ex = int128(b.x_num) * a.den - int128(a.x_num) * b.den;
    const int128 ey = int128(b.y_num) * a.den - int128(a.y_num) * b.den;
    const int128 px = int128(X) * a.den - a.x_num;
    const int128 py = int128(Y) * a.den - a.y_num;
    return sign_of(ex * py - ey * px);
}

} // namespace detail

// Number of integer points in the closed triangle v1 v2 v3. Collinear vertices
// give the count on the segment they span.
inline count_t count_lattice_points_triangle(const RationalPoint& v1, const RationalPoint& v2, const RationalPoint& v3)
{
    for (const auto* v : {&v1, &v2, &v3}) {
        if (v->den <= 0 || v->den > kMaxTriangleDenominator)
            throw std::out_of_range("triangle vertex denominator must lie in [1, 2^20]");
        if (v->x_num > kMaxTriangleNumerator || v->x_num < -kMaxTriangleNumerator ||
            v->y_num > kMaxTriangleNumerator || v->y_num < -kMaxTriangleNumerator)
            throw std::out_of_range("triangle vertex numerator must lie in [-2^40, 2^40]");
    }
    using detail::ceil_div;
    using detail::floor_div;
    const std::int64_t x_lo = std::min({ceil_div(v1.x_num, v1.den), ceil_div(v2.x_num, v2.den), ceil_div(v3.x_num, v3.den)});
    const std::int64_t x_hi = std::max({floor_div(v1.x_num, v1.den), floor_div(v2.x_num, v2.den), floor_div(v3.x_num, v3.den)});
    const std::int64_t y_lo = std::min({ceil_div(v1.y_num, v1.den), ceil_div(v2.y_num, v2.den), ceil_div(v3.y_num, v3.den)});
    const std::int64_t y_hi = std::max({floor_div(v1.y_num, v1.den), floor_div(v2.y_num, v2.den), floor_div(v3.y_num, v3.den)});

    count_t count = 0;
    for (std::int64_t y = y_lo; y <= y_hi; ++y) {
        for (std::int64_t x = x_lo; x <= x_hi; ++x) {
            const int s1 = detail::edge_sign(v1, v2, x, y);
            const int s2 = detail::edge_sign(v2, v3, x, y);
            const int s3 = detail::edge_sign(v3, v1, x, y);
            const bool has_neg = s1 < 0 || s2 < 0 || s3 < 0;
            const bool has_pos = s1 > 0 || s2 > 0 || s3 > 0;
            if (!(has_neg && has_pos)) ++count;
        }
    }
    return count;
}

} // namespace quadchroma

#endif
