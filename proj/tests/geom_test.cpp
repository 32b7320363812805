#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include <quadchroma/geom.hpp>

#include "oracle.hpp"

using namespace quadchroma;

namespace {

using Quad = std::array<LatticePoint, 4>;

std::set<std::set<std::pair<std::int64_t, std::int64_t>>> diagonal_set(const Quad& s, const QuadClass& c)
{
    auto seg = [&](const std::array<std::uint8_t, 2>& d) {
        return std::set<std::pair<std::int64_t, std::int64_t>>{{s[d[0]].x, s[d[0]].y}, {s[d[1]].x, s[d[1]].y}};
    };
    return {seg(c.diag_a), seg(c.diag_b)};
}

Quad random_quad(std::mt19937_64& rng, std::int64_t span)
{
    std::uniform_int_distribution<std::int64_t> coord(-span, span);
    Quad s;
    for (auto& p : s) p = {coord(rng), coord(rng)};
    return s;
}

ColorRule random_rule(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::int64_t> num(-6, 6), den(1, 4);
    std::bernoulli_distribution coin(0.5);
    SlopeBound a = coin(rng) ? SlopeBound::neg_infinity() : SlopeBound::rational(num(rng), den(rng));
    SlopeBound b = coin(rng) ? SlopeBound::pos_infinity() : SlopeBound::rational(num(rng), den(rng));
    if (compare(a, b) > 0) std::swap(a, b);
    ColorRule r{a, b, coin(rng), coin(rng), coin(rng) ? Color::red : Color::blue, coin(rng) ? Color::red : Color::blue};
    r.validate();
    return r;
}

} // namespace

TEST(Orient, BasicSigns)
{
    EXPECT_EQ(orient(LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{0, 1}), 1);
    EXPECT_EQ(orient(LatticePoint{0, 0}, LatticePoint{1, 1}, LatticePoint{2, 2}), 0);
    EXPECT_EQ(orient(LatticePoint{0, 0}, LatticePoint{0, 1}, LatticePoint{1, 0}), -1);
}

TEST(Orient, ExtremeCoordinatesStayExact)
{
    const std::int64_t M = kMaxLatticeCoord;
    EXPECT_EQ(orient(LatticePoint{-M, -M}, LatticePoint{M, -M}, LatticePoint{M, M}), 1);
    EXPECT_EQ(orient(LatticePoint{-M, -M}, LatticePoint{M, M}, LatticePoint{M - 1, M - 1}), 0);
    EXPECT_EQ(orient(LatticePoint{-M, M}, LatticePoint{M, -M}, LatticePoint{M, M}), 1);
    EXPECT_THROW(make_lattice_point(M + 1, 0), std::out_of_range);
    EXPECT_THROW(make_dyadic_point(0, 0, 54), std::out_of_range);
    EXPECT_THROW(make_dyadic_point(5, 0, 2), std::out_of_range);
}

TEST(Orient, DyadicMixedScales)
{
    // (1/2, 0), (1/2, 1/2) and (1/4, 1/4): same positions at different scales.
    const DyadicPoint a = make_dyadic_point(1, 0, 1);
    const DyadicPoint b = make_dyadic_point(2, 2, 2);
    const DyadicPoint c = make_dyadic_point(1, 1, 2);
    EXPECT_EQ(orient(a, b, c), orient(LatticePoint{2, 0}, LatticePoint{2, 2}, LatticePoint{1, 1}));
    EXPECT_EQ(orient(make_dyadic_point(0, 0, 0), make_dyadic_point(1, 1, 1), make_dyadic_point(4, 4, 3)), 0);
}

TEST(SegmentsCross, Examples)
{
    EXPECT_TRUE(segments_cross_properly(LatticePoint{0, 0}, LatticePoint{2, 2}, LatticePoint{0, 2}, LatticePoint{2, 0}));
    EXPECT_FALSE(segments_cross_properly(LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{0, 1}, LatticePoint{1, 1}));
    EXPECT_FALSE(segments_cross_properly(LatticePoint{0, 0}, LatticePoint{2, 0}, LatticePoint{1, 0}, LatticePoint{3, 0}));
    // T-junction: an endpoint on the other segment's interior.
    EXPECT_FALSE(segments_cross_properly(LatticePoint{0, 0}, LatticePoint{2, 0}, LatticePoint{1, 0}, LatticePoint{1, 3}));
    // Shared endpoint.
    EXPECT_FALSE(segments_cross_properly(LatticePoint{0, 0}, LatticePoint{2, 0}, LatticePoint{0, 0}, LatticePoint{1, 3}));
}

TEST(SegmentsCross, AgreesWithParametricOracle)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        const Quad s = random_quad(rng, 4);
        if (s[0] == s[1] || s[2] == s[3]) continue;
        EXPECT_EQ(segments_cross_properly(s[0], s[1], s[2], s[3]), oracle::open_segments_meet(s[0], s[1], s[2], s[3]));
    }
}

TEST(ClassifyQuad, Examples)
{
    const Quad square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    const QuadClass c = classify_quad(square);
    ASSERT_EQ(c.kind, QuadClass::Kind::convex);
    EXPECT_EQ(c.diag_a, (std::array<std::uint8_t, 2>{0, 2}));
    EXPECT_EQ(c.diag_b, (std::array<std::uint8_t, 2>{1, 3}));

    EXPECT_EQ(classify_quad(Quad{{{0, 0}, {3, 0}, {0, 3}, {1, 1}}}).kind, QuadClass::Kind::concave);
    EXPECT_EQ(classify_quad(Quad{{{0, 0}, {1, 1}, {2, 2}, {0, 1}}}).kind, QuadClass::Kind::degenerate);
    EXPECT_EQ(classify_quad(Quad{{{0, 0}, {0, 0}, {2, 1}, {0, 1}}}).kind, QuadClass::Kind::degenerate);
}

TEST(ClassifyQuad, PermutationInvariant)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        Quad s = random_quad(rng, 5);
        const QuadClass ref = classify_quad(s);
        const auto ref_diags = ref.convex() ? diagonal_set(s, ref) : decltype(diagonal_set(s, ref)){};
        std::array<int, 4> perm{0, 1, 2, 3};
        do {
            const Quad p{s[perm[0]], s[perm[1]], s[perm[2]], s[perm[3]]};
            const QuadClass c = classify_quad(p);
            ASSERT_EQ(c.kind, ref.kind);
            if (c.convex()) {
                ASSERT_EQ(diagonal_set(p, c), ref_diags);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST(ClassifyQuad, TranslationAndScalingInvariant)
{
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<std::int64_t> shift(-1000000, 1000000), scale(1, 1000);
    for (int trial = 0; trial < 5000; ++trial) {
        const Quad s = random_quad(rng, 6);
        const std::int64_t dx = shift(rng), dy = shift(rng), k = scale(rng);
        Quad moved;
        for (int i = 0; i < 4; ++i) moved[i] = {s[i].x * k + dx, s[i].y * k + dy};
        EXPECT_EQ(classify_quad(moved), classify_quad(s));
    }
}

TEST(ClassifyQuad, ConvexHasExactlyOneCrossingPairing)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20000; ++trial) {
        const Quad s = random_quad(rng, 5);
        const QuadClass c = classify_quad(s);
        const bool oracle_convex = oracle::crossing_diagonals(s).has_value();
        ASSERT_EQ(c.convex(), oracle_convex);
        if (c.kind == QuadClass::Kind::degenerate) continue;
        const int crossings = int(segments_cross_properly(s[0], s[1], s[2], s[3])) +
                              int(segments_cross_properly(s[0], s[2], s[1], s[3])) +
                              int(segments_cross_properly(s[0], s[3], s[1], s[2]));
        ASSERT_EQ(crossings, c.convex() ? 1 : 0);
        if (c.convex()) {
            EXPECT_TRUE(segments_cross_properly(s[c.diag_a[0]], s[c.diag_a[1]], s[c.diag_b[0]], s[c.diag_b[1]]));
        }
    }
}

TEST(SlopeColor, DefaultRuleExamples)
{
    const ColorRule chi = ColorRule::chi_slope();
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{1, 2}, chi), Color::red);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{1, 0}, chi), Color::blue);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{0, 1}, chi), Color::blue);
    EXPECT_EQ(slope_color(LatticePoint{3, 1}, LatticePoint{1, 3}, chi), Color::blue);
    // Orientation of the segment does not matter.
    EXPECT_EQ(slope_color(LatticePoint{1, 2}, LatticePoint{0, 0}, chi), Color::red);
}

TEST(SlopeColor, EndpointFlags)
{
    const auto minus_one = SlopeBound::rational(-1), one = SlopeBound::rational(1);
    const ColorRule open = ColorRule::blue_interval(minus_one, true, one, true);
    const ColorRule closed = ColorRule::blue_interval(minus_one, false, one, false);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{1, 1}, open), Color::red);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{1, 1}, closed), Color::blue);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{2, -2}, open), Color::red);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{3, 1}, open), Color::blue);

    // Slope 2^-16 sits on the endpoint; one unit less sits strictly inside.
    const auto tiny = SlopeBound::rational(1, 65536);
    const ColorRule upto_tiny = ColorRule::blue_interval(SlopeBound::neg_infinity(), false, tiny, false);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{65536, 1}, upto_tiny), Color::blue);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{65537, 1}, upto_tiny), Color::blue);
    EXPECT_EQ(slope_color(LatticePoint{0, 0}, LatticePoint{65535, 1}, upto_tiny), Color::red);
}

TEST(SlopeColor, RuleValidation)
{
    EXPECT_THROW(ColorRule::blue_interval(SlopeBound::rational(1), false, SlopeBound::rational(0), false),
                 std::invalid_argument);
    EXPECT_THROW(ColorRule::blue_interval(SlopeBound::pos_infinity(), false, SlopeBound::pos_infinity(), false),
                 std::invalid_argument);
    EXPECT_THROW(SlopeBound::rational(1, 0), std::invalid_argument);
    EXPECT_EQ(SlopeBound::rational(6, -4), SlopeBound::rational(-3, 2));
}

TEST(SlopeColor, AgreesWithRationalOracle)
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> big(-(std::int64_t(1) << 53), std::int64_t(1) << 53);
    std::uniform_int_distribution<std::int64_t> small(-3, 3);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < 100000; ++i) {
        const ColorRule rule = random_rule(rng);
        LatticePoint p{big(rng), big(rng)};
        LatticePoint q{big(rng), big(rng)};
        if (coin(rng)) q = {p.x + small(rng), p.y + small(rng)}; // hit vertical, horizontal and endpoint slopes
        if (p == q) continue;
        ASSERT_EQ(slope_color(p, q, rule), oracle::slope_color(p, q, rule)) << i;
    }
}

TEST(MonoCrossing, Examples)
{
    const ColorRule chi = ColorRule::chi_slope();
    EXPECT_FALSE(is_mono_crossing_quad(Quad{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, chi));
    // Diagonals (0,0)-(4,4) and (3,1)-(1,3): slopes +1 and -1.
    EXPECT_FALSE(is_mono_crossing_quad(Quad{{{0, 0}, {3, 1}, {4, 4}, {1, 3}}}, chi));
    // Diagonals (0,0)-(4,4) and (2,0)-(3,4): slopes 1 and 4.
    EXPECT_TRUE(is_mono_crossing_quad(Quad{{{0, 0}, {2, 0}, {4, 4}, {3, 4}}}, chi));
    EXPECT_FALSE(is_mono_crossing_quad(Quad{{{0, 0}, {3, 0}, {0, 3}, {1, 1}}}, chi));
    const ColorRule everything = ColorRule::blue_interval(SlopeBound::neg_infinity(), true, SlopeBound::pos_infinity(), true);
    EXPECT_FALSE(is_mono_crossing_quad(Quad{{{0, 0}, {3, 0}, {0, 3}, {1, 1}}}, everything));
    EXPECT_TRUE(is_mono_crossing_quad(Quad{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, everything));
}

TEST(MonoCrossing, ComplementInvariant)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20000; ++i) {
        const Quad s = random_quad(rng, 4);
        const ColorRule rule = random_rule(rng);
        ASSERT_EQ(is_mono_crossing_quad(s, rule), is_mono_crossing_quad(s, complement(rule)));
    }
}

TEST(MonoCrossing, ReflectionSwapsSlopeSigns)
{
    const ColorRule nonpositive = ColorRule::chi_slope();
    const ColorRule nonnegative =
        ColorRule::blue_interval(SlopeBound::rational(0), false, SlopeBound::pos_infinity(), false, Color::blue);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20000; ++i) {
        const Quad s = random_quad(rng, 4);
        Quad mirrored;
        for (int k = 0; k < 4; ++k) mirrored[k] = {-s[k].x, s[k].y};
        ASSERT_EQ(is_mono_crossing_quad(s, nonpositive), is_mono_crossing_quad(mirrored, nonnegative));
    }
}

TEST(MonoCrossing, DyadicMatchesNumerators)
{
    std::mt19937_64 rng(10);
    const ColorRule chi = ColorRule::chi_slope();
    for (int i = 0; i < 5000; ++i) {
        std::array<DyadicPoint, 4> d;
        Quad l;
        for (int k = 0; k < 4; ++k) {
            d[k] = make_dyadic_point(std::int64_t(rng() % 9), std::int64_t(rng() % 9), 3);
            l[k] = {d[k].nx, d[k].ny};
        }
        ASSERT_EQ(classify_quad(d), classify_quad(l));
        ASSERT_EQ(is_mono_crossing_quad(d, chi), is_mono_crossing_quad(l, chi));
    }
}
