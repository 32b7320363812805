// Prints the exact monochromatic-crossing fraction on small grids next to a
// Monte Carlo estimate in the unit square.

#include <cstdio>

#include <quadchroma/quadchroma.hpp>

int main()
{
    using namespace quadchroma;
    const ColorRule rule = ColorRule::chi_slope();

    for (std::int64_t m : {2, 4, 6, 8}) {
        const GridCounts g = count_grid(m, rule, GridMethod::direct);
        std::printf("P_%lld: mono/total = %s/%s = %.6f\n", static_cast<long long>(m), to_string(g.mono).c_str(),
                    to_string(g.total_quadruples).c_str(), double(g.mono) / double(g.total_quadruples));
    }

    const QuadProbs probs = estimate_quad_probs(1000000, RngSpec{1, 0}, rule);
    std::printf("unit square, 1e6 samples: p_mono = %.5f +- %.5f, p_convex = %.5f +- %.5f\n", probs.p_mono.p_hat,
                probs.p_mono.se, probs.p_convex.p_hat, probs.p_convex.se);
    std::printf("references: p_mono = 1/4, p_convex = %s\n", valtr_probability(4).str().c_str());
}
