#ifndef QUADCHROMA_TOOLS_CLI_APP_HPP
#define QUADCHROMA_TOOLS_CLI_APP_HPP

// Command-line driver. run_cli() is the whole program minus process setup so
// the test suite can call it in-process.
//
// Exit codes: 0 success, 2 usage error, 3 resource-guard refusal,
// 4 internal invariant violation.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <quadchroma/quadchroma.hpp>
#include <quadchroma/report.hpp>

namespace quadchroma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitInvariant = 4;

// Scans above this many quadruple tests need --yes.
inline constexpr double kConfirmThreshold = 1e10;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GuardRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    int threads = -1;
    std::string out_path;
    bool yes = false;
};

inline unsigned effective_threads(const CommonOptions& common)
{
    if (common.threads >= 0) return resolve_threads(unsigned(common.threads));
    if (const char* env = std::getenv("QUADCHROMA_THREADS"); env != nullptr && *env != '\0') {
        unsigned value = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, value);
        if (ec != std::errc() || ptr != end) throw UsageError("QUADCHROMA_THREADS must be a non-negative integer");
        return resolve_threads(value);
    }
    return resolve_threads(0);
}

inline void check_cost(const std::string& what, double tests, const CommonOptions& common, std::ostream& err)
{
    if (tests <= kConfirmThreshold) return;
    std::ostringstream msg;
    msg << what << ": estimated " << tests << " quadruple tests";
    if (!common.yes) throw GuardRefusal(msg.str() + "; rerun with --yes to proceed");
    err << msg.str() << "\n";
}

inline std::string shortest(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "rule,p_mono,se,delta_vs_baseline,paired_se,z\n";
    for (const auto& row : rows) {
        out += csv_quote(format_rule(row.rule)) + "," + shortest(row.p_mono_hat) + "," + shortest(row.se) + "," +
               shortest(row.paired_delta_vs_baseline) + "," + shortest(row.paired_se) + "," + shortest(row.z()) + "\n";
    }
    return out;
}

inline Json ratio_json(count_t num, count_t den)
{
    const ExactRational r(num, den);
    return Json{{"exact", r.str()}, {"value", r.to_double()}};
}

// The default coloring or its complement: the rules whose monochromatic
// probability the theorem pins at 1/4.
inline bool is_slope_coloring(const ColorRule& rule)
{
    return rule == ColorRule::chi_slope() || rule == complement(ColorRule::chi_slope());
}

inline GridMethod parse_grid_method(const std::string& s)
{
    if (s == "direct") return GridMethod::direct;
    if (s == "per-box") return GridMethod::per_box;
    throw UsageError("--method must be direct or per-box");
}

class App {
public:
    App(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args)
    {
        CLI::App app{"Exact and Monte Carlo census of same-colored crossings among four points"};
        app.name("quadchroma");
        app.require_subcommand(1);

        auto* box = app.add_subcommand("exact-box", "Census of convex quadruples with bounding box exactly Q_{w,h}");
        box->set_help_flag("--help", "Print this help message and exit");
        std::int64_t w = 0, h = 0;
        bool breakdown = false;
        std::string box_method = "direct";
        std::string box_rule = "blue=[-inf,0]";
        box->add_option("--w", w, "Box width")->required()->check(CLI::Range(std::int64_t(1), kMaxEnumerationPoints));
        box->add_option("--h", h, "Box height")->required()->check(CLI::Range(std::int64_t(1), kMaxEnumerationPoints));
        box->add_flag("--breakdown", breakdown, "Report the corner-class breakdown");
        box->add_option("--method", box_method, "direct | ie")->check(CLI::IsMember({"direct", "ie"}));
        box->add_option("--rule", box_rule, "Coloring rule, e.g. blue=[-inf,0]");
        add_common(box);

        auto* grid = app.add_subcommand("exact-grid", "Census of all quadruples of the grid P_m");
        std::int64_t m = 0;
        std::string grid_method = "direct";
        std::string grid_rule = "blue=[-inf,0]";
        grid->add_option("--m", m, "Grid size")->required()->check(CLI::Range(std::int64_t(1), kMaxEnumerationPoints));
        grid->add_option("--method", grid_method, "direct | per-box")->check(CLI::IsMember({"direct", "per-box"}));
        grid->add_option("--rule", grid_rule, "Coloring rule");
        add_common(grid);

        auto* mc = app.add_subcommand("mc", "Monte Carlo estimates in the unit square");
        std::uint64_t samples = 1000000, seed = 0, stream = 0, n_points = 0, trials = 1000;
        std::string mc_rule = "blue=[-inf,0]";
        bool oracle = false;
        mc->add_option("--samples", samples, "Number of sampled quadruples")->check(CLI::PositiveNumber);
        mc->add_option("--seed", seed, "RNG seed");
        mc->add_option("--stream", stream, "RNG stream");
        mc->add_option("--rule", mc_rule, "Coloring rule");
        mc->add_option("--n-points", n_points, "Also estimate crossings of complete graphs on this many points");
        mc->add_option("--trials", trials, "Graph trials (with --n-points)")->check(CLI::PositiveNumber);
        mc->add_flag("--oracle", oracle, "Cross-check graph crossings by pairwise segment tests");
        add_common(mc);

        auto* sweep = app.add_subcommand("sweep", "Compare coloring rules on common samples");
        std::uint64_t sweep_samples = 1000000, sweep_seed = 0, sweep_stream = 0;
        std::string rules_file, grid_spec, format = "csv";
        std::vector<std::string> sweep_rules;
        sweep->add_option("--samples", sweep_samples, "Number of sampled quadruples")->check(CLI::PositiveNumber);
        sweep->add_option("--seed", sweep_seed, "RNG seed");
        sweep->add_option("--stream", sweep_stream, "RNG stream");
        auto* file_opt = sweep->add_option("--rules-file", rules_file, "One rule per line; first is the baseline");
        auto* grid_opt = sweep->add_option("--grid", grid_spec, "lo:hi:steps sweep of blue=[-inf,t]");
        auto* rule_opt = sweep->add_option("--rule", sweep_rules, "Rule (repeatable); first is the baseline");
        file_opt->excludes(grid_opt)->excludes(rule_opt);
        grid_opt->excludes(rule_opt);
        sweep->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        add_common(sweep);

        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            out_ << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp& e) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitUsage;
        }

        command_ = "quadchroma";
        for (const auto& a : args) command_ += " " + a;

        try {
            const auto start = std::chrono::steady_clock::now();
            if (box->parsed()) {
                RunReport r = exact_box({w, h}, breakdown, box_method, parse_rule_arg(box_rule));
                return emit(std::move(r), start);
            }
            if (grid->parsed()) {
                RunReport r = exact_grid(m, parse_grid_method(grid_method), parse_rule_arg(grid_rule));
                return emit(std::move(r), start);
            }
            if (mc->parsed()) {
                RunReport r = monte_carlo(samples, {seed, stream}, parse_rule_arg(mc_rule), n_points, trials, oracle);
                return emit(std::move(r), start);
            }
            std::vector<ColorRule> rules;
            if (!rules_file.empty()) {
                std::ifstream in(rules_file);
                if (!in) throw UsageError("cannot read rules file '" + rules_file + "'");
                std::stringstream buf;
                buf << in.rdbuf();
                rules = parse_rules_text(buf.str());
            } else if (!grid_spec.empty()) {
                rules = grid_rules(grid_spec);
            } else if (!sweep_rules.empty()) {
                for (const auto& s : sweep_rules) rules.push_back(parse_rule(s));
            } else {
                throw UsageError("sweep needs --rules-file, --grid or at least one --rule");
            }
            return run_sweep(rules, sweep_samples, {sweep_seed, sweep_stream}, format, start);
        } catch (const UsageError& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const RuleSyntaxError& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const GuardRefusal& e) {
            err_ << "refused: " << e.what() << "\n";
            return kExitGuard;
        } catch (const SizeGuardError& e) {
            err_ << "refused: " << e.what() << "\n";
            return kExitGuard;
        } catch (const InvariantViolation& e) {
            err_ << "invariant violation: " << e.what() << "\n";
            return kExitInvariant;
        } catch (const std::invalid_argument& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const std::exception& e) {
            err_ << "internal error: " << e.what() << "\n";
            return kExitInvariant;
        }
    }

private:
    void add_common(CLI::App* sub)
    {
        sub->add_option("--threads", common_.threads, "Worker threads (default: QUADCHROMA_THREADS or all cores)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--out", common_.out_path, "Write output to this file instead of stdout");
        sub->add_flag("--yes", common_.yes, "Proceed with runs above 1e10 quadruple tests");
    }

    static ColorRule parse_rule_arg(const std::string& s) { return parse_rule(s); }

    RunReport base_report(const std::string& name)
    {
        threads_ = effective_threads(common_);
        RunReport r;
        r.command = command_;
        r.parameters["subcommand"] = name;
        r.workers = threads_;
        return r;
    }

    RunReport exact_box(GridBox box, bool breakdown, const std::string& method, const ColorRule& rule)
    {
        RunReport r = base_report("exact-box");
        r.parameters["w"] = box.w;
        r.parameters["h"] = box.h;
        r.parameters["method"] = method;
        r.parameters["breakdown"] = breakdown;
        r.parameters["rule"] = format_rule(rule);
        detail::check_enumeration_size(box.w, box.h);
        const count_t wh2 = count_t(box.w) * box.w * box.h * box.h;

        if (method == "ie") {
            if (breakdown) throw UsageError("--breakdown requires --method direct");
            double cost = 0;
            for (int dw = 0; dw <= 2; ++dw)
                for (int dh = 0; dh <= 2; ++dh) cost += double(binomial((box.w - dw + 1) * (box.h - dh + 1), 4));
            check_cost("exact-box", cost, common_, err_);
            const ContainedCounts c = count_box_ie_census(box, rule, threads_);
            r.results["a_total"] = exact(c.mono);
            r.results["convex_total"] = exact(c.convex);
            r.results["a_total_over_w2h2"] = ratio_json(c.mono, wh2);
        } else {
            check_cost("exact-box", double(box_scan_size(box)), common_, err_);
            const BoxCounts b = count_box(box, rule, threads_);
            count_t sum = 0;
            for (auto v : b.a_by_corners) sum += v;
            if (sum != b.a_total) throw InvariantViolation("corner breakdown does not sum to a_total");
            r.results["a_total"] = exact(b.a_total);
            r.results["convex_total"] = exact(b.convex_total);
            r.results["a_total_over_w2h2"] = ratio_json(b.a_total, wh2);
            if (breakdown) {
                Json by = Json::array();
                for (auto v : b.a_by_corners) by.push_back(exact(v));
                r.results["a_by_corners"] = by;
                r.results["c2"] = exact(b.c2);
                r.results["d2"] = exact(b.d2);
                r.results["c2_anti"] = exact(b.c2_anti);
                r.results["d2_anti"] = exact(b.d2_anti);
                r.results["s2"] = exact(b.s2);
                Json ratios = Json::object();
                for (std::size_t i = 0; i < 3; ++i) ratios["a" + std::to_string(i)] = ratio_json(b.a_by_corners[i], wh2);
                ratios["c2"] = ratio_json(b.c2, wh2);
                ratios["d2"] = ratio_json(b.d2, wh2);
                r.results["over_w2h2"] = ratios;
            }
        }
        const BoxAsymptotics a = asymptotic_box(box.w, box.h);
        r.references = Json{{"a", a.a}, {"a0", a.a0}, {"a1", a.a1}, {"a2", a.a2}, {"c2", a.c2}, {"d2", a.d2},
                            {"a_over_w2h2", "3/2"}};
        return r;
    }

    RunReport exact_grid(std::int64_t m, GridMethod method, const ColorRule& rule)
    {
        RunReport r = base_report("exact-grid");
        r.parameters["m"] = m;
        r.parameters["method"] = method == GridMethod::direct ? "direct" : "per-box";
        r.parameters["rule"] = format_rule(rule);
        detail::check_enumeration_size(m, m);
        check_cost("exact-grid", double(grid_scan_size(m, method)), common_, err_);
        const GridCounts g = count_grid(m, rule, method, threads_);
        if (g.mono > g.convex || g.convex > g.total_quadruples)
            throw InvariantViolation("mono <= convex <= total violated");
        r.results["total_quadruples"] = exact(g.total_quadruples);
        r.results["convex"] = exact(g.convex);
        r.results["mono"] = exact(g.mono);
        r.results["mono_ratio"] = ratio_json(g.mono, g.total_quadruples);
        r.results["convex_ratio"] = ratio_json(g.convex, g.total_quadruples);
        const auto constants = mono_given_any_constants();
        const double asym = asymptotic_grid(m);
        r.references = Json{{"p_convex", exact(constants.p_convex)},
                            {"asymptotic_mono", asym},
                            {"asymptotic_mono_ratio", asym / double(g.total_quadruples)}};
        if (is_slope_coloring(rule)) r.references["p_mono"] = exact(constants.p_mono);
        return r;
    }

    RunReport monte_carlo(std::uint64_t samples, RngSpec rng, const ColorRule& rule, std::uint64_t n_points,
                          std::uint64_t trials, bool oracle)
    {
        RunReport r = base_report("mc");
        r.parameters["samples"] = std::to_string(samples);
        r.parameters["seed"] = std::to_string(rng.seed);
        r.parameters["stream"] = std::to_string(rng.stream);
        r.parameters["rule"] = format_rule(rule);
        if (n_points != 0) {
            r.parameters["n_points"] = n_points;
            r.parameters["trials"] = std::to_string(trials);
            r.parameters["oracle"] = oracle;
        }
        check_cost("mc", double(samples), common_, err_);

        const auto constants = mono_given_any_constants();
        const QuadProbs probs = estimate_quad_probs(samples, rng, rule, threads_);
        if (probs.p_mono.hits > probs.p_convex.hits) throw InvariantViolation("p_mono exceeds p_convex");
        r.results["p_convex"] = estimate_json(probs.p_convex);
        r.results["p_mono"] = estimate_json(probs.p_mono);
        r.results["z_convex"] = probs.p_convex.z_against(constants.p_convex.to_double());
        r.references["p_convex"] = exact(constants.p_convex);
        const bool slope = is_slope_coloring(rule);
        if (slope) {
            r.results["z_mono"] = probs.p_mono.z_against(constants.p_mono.to_double());
            r.references["p_mono"] = exact(constants.p_mono);
        }

        if (n_points != 0) {
            if (n_points < 4 || n_points > kMaxGraphPoints) throw UsageError("--n-points must lie in [4, 400]");
            check_cost("mc graph", double(trials) * double(binomial(n_points, 4)) * (oracle ? 2.0 : 1.0), common_, err_);
            const GraphCrossingStats g = estimate_graph_crossings(n_points, trials, rng, rule, oracle, threads_);
            if (g.oracle_mismatches != 0)
                throw InvariantViolation(std::to_string(g.oracle_mismatches) + " trials disagree between crossing counts");
            r.results["graph"] = Json{{"mean_cr", g.mean_cr},         {"se_cr", g.se_cr},
                                      {"mean_cr_chi", g.mean_cr_chi}, {"se_cr_chi", g.se_cr_chi},
                                      {"oracle_checked", g.oracle_checked}};
            const ExactRational subsets(binomial(n_points, 4));
            r.references["expected_cr"] = exact(constants.p_convex * subsets);
            if (slope) r.references["expected_cr_chi"] = exact(constants.p_mono * subsets);
        }
        return r;
    }

    int run_sweep(const std::vector<ColorRule>& rules, std::uint64_t samples, RngSpec rng, const std::string& format,
                  std::chrono::steady_clock::time_point start)
    {
        RunReport r = base_report("sweep");
        check_cost("sweep", double(samples), common_, err_);
        const auto rows = sweep_intervals(rules, samples, rng, threads_);
        if (format == "csv") return write(sweep_csv(rows));

        r.parameters["samples"] = std::to_string(samples);
        r.parameters["seed"] = std::to_string(rng.seed);
        r.parameters["stream"] = std::to_string(rng.stream);
        Json rule_list = Json::array();
        for (const auto& rule : rules) rule_list.push_back(format_rule(rule));
        r.parameters["rules"] = rule_list;
        Json out_rows = Json::array();
        for (const auto& row : rows) {
            out_rows.push_back(Json{{"rule", format_rule(row.rule)},
                                    {"p_mono", row.p_mono_hat},
                                    {"se", row.se},
                                    {"delta_vs_baseline", row.paired_delta_vs_baseline},
                                    {"paired_se", row.paired_se},
                                    {"z", row.z()},
                                    {"mono_hits", std::to_string(row.mono_hits)},
                                    {"boundary_hits", std::to_string(row.boundary_hits)}});
        }
        r.results["rows"] = out_rows;
        return emit(std::move(r), start);
    }

    int emit(RunReport r, std::chrono::steady_clock::time_point start)
    {
        r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return write(Json(r).dump(2) + "\n");
    }

    int write(const std::string& text)
    {
        if (common_.out_path.empty()) {
            out_ << text;
            return kExitOk;
        }
        std::ofstream f(common_.out_path);
        if (!f) throw UsageError("cannot write '" + common_.out_path + "'");
        f << text;
        return kExitOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    CommonOptions common_;
    unsigned threads_ = 1;
    std::string command_;
};

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    App app(out, err);
    return app.run(args);
}

} // namespace quadchroma::cli

#endif
