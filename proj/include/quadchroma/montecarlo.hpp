#ifndef QUADCHROMA_MONTECARLO_HPP
#define QUADCHROMA_MONTECARLO_HPP

// Reproducible Monte Carlo estimation in the unit-square model.
//
// Samples are dyadic points with 53-bit numerators, so every downstream
// predicate is exact. The sample stream is cut into fixed-size chunks; chunk c
// draws from its own std::mt19937_64 seeded through std::seed_seq with
// (seed, stream, c). Both are fully specified by the standard, and all
// reductions are integer sums, so results are bit-identical for any thread
// count and any platform.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "geom.hpp"
#include "int128.hpp"
#include "parallel.hpp"

namespace quadchroma {

inline constexpr int kSampleScale = 53;
inline constexpr std::uint64_t kSamplesPerChunk = std::uint64_t(1) << 16;

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

inline std::mt19937_64 chunk_engine(const RngSpec& rng, std::uint64_t chunk)
{
    auto lo = [](std::uint64_t v) { return std::uint32_t(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return std::uint32_t(v >> 32); };
    std::seed_seq seq{lo(rng.seed), hi(rng.seed), lo(rng.stream), hi(rng.stream), lo(chunk), hi(chunk)};
    return std::mt19937_64(seq);
}

inline DyadicPoint sample_point(std::mt19937_64& engine)
{
    const std::int64_t nx = std::int64_t(engine() >> (64 - kSampleScale));
    const std::int64_t ny = std::int64_t(engine() >> (64 - kSampleScale));
    return {nx, ny, kSampleScale};
}

inline std::array<DyadicPoint, 4> sample_quad(std::mt19937_64& engine)
{
    std::array<DyadicPoint, 4> s;
    for (auto& p : s) p = sample_point(engine);
    return s;
}

// All points share the sample scale, so predicates can use the numerators directly.
inline std::array<LatticePoint, 4> numerators(const std::array<DyadicPoint, 4>& s)
{
    return {LatticePoint{s[0].nx, s[0].ny}, LatticePoint{s[1].nx, s[1].ny}, LatticePoint{s[2].nx, s[2].ny},
            LatticePoint{s[3].nx, s[3].ny}};
}

struct Estimate {
    double p_hat = 0;
    std::uint64_t n = 0;
    double se = 0;
    std::uint64_t hits = 0;

    static Estimate from_counts(std::uint64_t hits, std::uint64_t n)
    {
        Estimate e;
        e.hits = hits;
        e.n = n;
        if (n > 0) {
            e.p_hat = double(hits) / double(n);
            e.se = std::sqrt(e.p_hat * (1.0 - e.p_hat) / double(n));
        }
        return e;
    }

    double z_against(double reference) const { return se > 0 ? (p_hat - reference) / se : 0.0; }

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct QuadProbs {
    Estimate p_convex;
    Estimate p_mono;
};

namespace detail {

inline std::size_t chunk_count(std::uint64_t n) { return std::size_t((n + kSamplesPerChunk - 1) / kSamplesPerChunk); }

inline std::uint64_t chunk_length(std::uint64_t n, std::size_t chunk)
{
    const std::uint64_t begin = std::uint64_t(chunk) * kSamplesPerChunk;
    return std::min(kSamplesPerChunk, n - begin);
}

} // namespace detail

inline QuadProbs estimate_quad_probs(std::uint64_t n, const RngSpec& rng, const ColorRule& rule, unsigned threads = 0)
{
    if (n < 1) throw std::invalid_argument("estimate_quad_probs requires n >= 1");
    struct Tally {
        std::uint64_t convex = 0;
        std::uint64_t mono = 0;
    };
    auto chunks = run_chunks<Tally>(detail::chunk_count(n), threads, [&](std::size_t c) {
        Tally t;
        auto engine = chunk_engine(rng, c);
        const std::uint64_t len = detail::chunk_length(n, c);
        for (std::uint64_t i = 0; i < len; ++i) {
            const auto s = numerators(sample_quad(engine));
            const QuadClass cls = classify_quad(s);
            if (!cls.convex()) continue;
            ++t.convex;
            if (diagonals_same_color(s, cls, rule)) ++t.mono;
        }
        return t;
    });
    Tally total;
    for (const auto& t : chunks) {
        total.convex += t.convex;
        total.mono += t.mono;
    }
    return {Estimate::from_counts(total.convex, n), Estimate::from_counts(total.mono, n)};
}

// ---------------------------------------------------------------------------
// Complete geometric graphs on random points

struct GraphCrossingStats {
    std::uint64_t n_points = 0;
    std::uint64_t trials = 0;
    double mean_cr = 0;
    double se_cr = 0;
    double mean_cr_chi = 0;
    double se_cr_chi = 0;
    // Set when the pairwise-segment cross-check ran on every trial.
    bool oracle_checked = false;
    std::uint64_t oracle_mismatches = 0;
};

inline constexpr std::uint64_t kMaxGraphPoints = 400;

struct TrialCrossings {
    std::uint64_t cr = 0;
    std::uint64_t cr_chi = 0;
};

// Crossings counted as convex 4-subsets and as 4-subsets with same-colored diagonals.
inline TrialCrossings crossings_by_quads(const std::vector<LatticePoint>& pts, const ColorRule& rule)
{
    TrialCrossings out;
    const std::size_t n = pts.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    const std::array<LatticePoint, 4> s{pts[a], pts[b], pts[c], pts[d]};
                    const QuadClass cls = classify_quad(s);
                    if (!cls.convex()) continue;
                    ++out.cr;
                    if (diagonals_same_color(s, cls, rule)) ++out.cr_chi;
                }
    return out;
}

// Crossings counted over all pairs of edges of the complete graph.
inline TrialCrossings crossings_by_edge_pairs(const std::vector<LatticePoint>& pts, const ColorRule& rule)
{
    struct Edge {
        LatticePoint p, q;
        Color color;
    };
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) edges.push_back({pts[a], pts[b], slope_color(pts[a], pts[b], rule)});

    TrialCrossings out;
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (std::size_t f = e + 1; f < edges.size(); ++f) {
            if (!segments_cross_properly(edges[e].p, edges[e].q, edges[f].p, edges[f].q)) continue;
            ++out.cr;
            if (edges[e].color == edges[f].color) ++out.cr_chi;
        }
    return out;
}

inline std::vector<LatticePoint> sample_points(std::mt19937_64& engine, std::uint64_t count)
{
    std::vector<LatticePoint> pts;
    pts.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const DyadicPoint p = sample_point(engine);
        pts.push_back({p.nx, p.ny});
    }
    return pts;
}

// Trial t draws its points from chunk engine t.
inline GraphCrossingStats estimate_graph_crossings(std::uint64_t n_points, std::uint64_t trials, const RngSpec& rng,
                                                   const ColorRule& rule, bool oracle = false, unsigned threads = 0)
{
    if (n_points < 4) throw std::invalid_argument("estimate_graph_crossings requires n_points >= 4");
    if (n_points > kMaxGraphPoints) throw std::length_error("estimate_graph_crossings limited to 400 points per trial");
    if (trials < 1) throw std::invalid_argument("estimate_graph_crossings requires trials >= 1");

    struct Tally {
        uint128 sum_cr = 0, sum_cr2 = 0, sum_chi = 0, sum_chi2 = 0;
        std::uint64_t mismatches = 0;
    };
    auto chunks = run_chunks<Tally>(std::size_t(trials), threads, [&](std::size_t t) {
        auto engine = chunk_engine(rng, t);
        const auto pts = sample_points(engine, n_points);
        const TrialCrossings c = crossings_by_quads(pts, rule);
        Tally tally;
        tally.sum_cr = c.cr;
        tally.sum_cr2 = uint128(c.cr) * c.cr;
        tally.sum_chi = c.cr_chi;
        tally.sum_chi2 = uint128(c.cr_chi) * c.cr_chi;
        if (oracle) {
            const TrialCrossings e = crossings_by_edge_pairs(pts, rule);
            if (e.cr != c.cr || e.cr_chi != c.cr_chi) tally.mismatches = 1;
        }
        return tally;
    });

    Tally total;
    for (const auto& t : chunks) {
        total.sum_cr += t.sum_cr;
        total.sum_cr2 += t.sum_cr2;
        total.sum_chi += t.sum_chi;
        total.sum_chi2 += t.sum_chi2;
        total.mismatches += t.mismatches;
    }

    auto mean_se = [trials](uint128 sum, uint128 sum2) {
        const double n = double(trials);
        const double mean = double(sum) / n;
        if (trials < 2) return std::pair{mean, 0.0};
        // Sample variance from exact integer moments.
        const double var = (double(sum2) - double(sum) * double(sum) / n) / (n - 1.0);
        return std::pair{mean, std::sqrt(std::max(var, 0.0) / n)};
    };

    GraphCrossingStats out;
    out.n_points = n_points;
    out.trials = trials;
    std::tie(out.mean_cr, out.se_cr) = mean_se(total.sum_cr, total.sum_cr2);
    std::tie(out.mean_cr_chi, out.se_cr_chi) = mean_se(total.sum_chi, total.sum_chi2);
    out.oracle_checked = oracle;
    out.oracle_mismatches = total.mismatches;
    return out;
}

// ---------------------------------------------------------------------------
// Interval sweeps with common random numbers

struct SweepRow {
    ColorRule rule;
    double p_mono_hat = 0;
    double se = 0;
    double paired_delta_vs_baseline = 0;
    double paired_se = 0;
    std::uint64_t n = 0;
    std::uint64_t mono_hits = 0;
    // Samples where this rule is monochromatic and the baseline is not, and vice versa.
    std::uint64_t gained = 0;
    std::uint64_t lost = 0;
    // Samples with a diagonal slope exactly on one of this rule's finite endpoints.
    std::uint64_t boundary_hits = 0;

    double z() const { return paired_se > 0 ? paired_delta_vs_baseline / paired_se : 0.0; }
};

// Every rule is evaluated on the same n sampled quadruples; rules[0] is the
// baseline. The sample sequence is the one estimate_quad_probs draws for rng.
inline std::vector<SweepRow> sweep_intervals(const std::vector<ColorRule>& rules, std::uint64_t n, const RngSpec& rng,
                                             unsigned threads = 0)
{
    if (rules.empty()) throw std::invalid_argument("sweep_intervals requires at least one rule");
    if (n < 1) throw std::invalid_argument("sweep_intervals requires n >= 1");
    const std::size_t r = rules.size();
    struct Tally {
        std::vector<std::uint64_t> mono, gained, lost, boundary;
    };
    auto chunks = run_chunks<Tally>(detail::chunk_count(n), threads, [&](std::size_t c) {
        Tally t{std::vector<std::uint64_t>(r), std::vector<std::uint64_t>(r), std::vector<std::uint64_t>(r),
                std::vector<std::uint64_t>(r)};
        std::vector<char> mono(r);
        auto engine = chunk_engine(rng, c);
        const std::uint64_t len = detail::chunk_length(n, c);
        for (std::uint64_t i = 0; i < len; ++i) {
            const auto s = numerators(sample_quad(engine));
            const QuadClass cls = classify_quad(s);
            if (!cls.convex()) continue;
            const auto& a0 = s[cls.diag_a[0]];
            const auto& a1 = s[cls.diag_a[1]];
            const auto& b0 = s[cls.diag_b[0]];
            const auto& b1 = s[cls.diag_b[1]];
            for (std::size_t k = 0; k < r; ++k) {
                mono[k] = slope_color(a0, a1, rules[k]) == slope_color(b0, b1, rules[k]);
                t.mono[k] += std::uint64_t(mono[k]);
                if (slope_on_boundary(a0, a1, rules[k]) || slope_on_boundary(b0, b1, rules[k])) ++t.boundary[k];
            }
            for (std::size_t k = 0; k < r; ++k) {
                if (mono[k] && !mono[0]) ++t.gained[k];
                if (!mono[k] && mono[0]) ++t.lost[k];
            }
        }
        return t;
    });

    std::vector<SweepRow> rows(r);
    for (std::size_t k = 0; k < r; ++k) {
        SweepRow& row = rows[k];
        row.rule = rules[k];
        row.n = n;
        for (const auto& t : chunks) {
            row.mono_hits += t.mono[k];
            row.gained += t.gained[k];
            row.lost += t.lost[k];
            row.boundary_hits += t.boundary[k];
        }
        const Estimate e = Estimate::from_counts(row.mono_hits, n);
        row.p_mono_hat = e.p_hat;
        row.se = e.se;
        // Per-sample difference d in {-1, 0, +1}; mean and standard error of d.
        const double nn = double(n);
        const double mean = (double(row.gained) - double(row.lost)) / nn;
        const double second = (double(row.gained) + double(row.lost)) / nn;
        row.paired_delta_vs_baseline = mean;
        row.paired_se = std::sqrt(std::max(second - mean * mean, 0.0) / nn);
    }
    return rows;
}

} // namespace quadchroma

#endif
