#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using namespace quadchroma;
using quadchroma::cli::run_cli;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;

    Json json() const { return Json::parse(out); }
};

CliRun run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents = "")
{
    const auto path = std::filesystem::temp_directory_path() / ("quadchroma_cli_test_" + name);
    std::ofstream(path) << contents;
    return path;
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

} // namespace

TEST(Cli, UsageErrorsExitWithTwo)
{
    EXPECT_EQ(run({}).code, cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"exact-box", "--w", "3"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"exact-box", "--w", "0", "--h", "2"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"exact-grid", "--m", "3", "--method", "sideways"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"exact-box", "--w", "2", "--h", "2", "--method", "ie", "--breakdown"}).code, cli::kExitUsage);
    const CliRun bad_rule = run({"mc", "--samples", "10", "--rule", "blue=[1,0]"});
    EXPECT_EQ(bad_rule.code, cli::kExitUsage);
    EXPECT_NE(bad_rule.err.find("exceeds"), std::string::npos) << bad_rule.err;
    EXPECT_EQ(run({"mc", "--n-points", "3", "--samples", "10", "--trials", "1"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"sweep", "--samples", "10"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"sweep", "--rules-file", "/nonexistent/rules.txt"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"sweep", "--grid", "0:1:2", "--rule", "blue=[-inf,0]"}).code, cli::kExitUsage);
}

TEST(Cli, HelpExitsCleanly)
{
    const CliRun r = run({"--help"});
    EXPECT_EQ(r.code, cli::kExitOk);
    EXPECT_NE(r.out.find("exact-box"), std::string::npos);
    EXPECT_EQ(run({"exact-box", "--help"}).code, cli::kExitOk);
}

TEST(Cli, GuardsExitWithThree)
{
    const CliRun big = run({"exact-box", "--w", "40", "--h", "40"});
    EXPECT_EQ(big.code, cli::kExitGuard);
    EXPECT_NE(big.err.find("refused"), std::string::npos);
    const CliRun costly = run({"mc", "--samples", "20000000000"});
    EXPECT_EQ(costly.code, cli::kExitGuard);
    EXPECT_NE(costly.err.find("--yes"), std::string::npos);
    EXPECT_EQ(run({"sweep", "--samples", "20000000000", "--rule", "blue=[-inf,0]"}).code, cli::kExitGuard);
}

TEST(Cli, YesIsAcceptedOnSmallRuns)
{
    EXPECT_EQ(run({"exact-grid", "--m", "2", "--yes"}).code, cli::kExitOk);
}

TEST(Cli, ExactBoxUnitSquare)
{
    const CliRun r = run({"exact-box", "--w", "1", "--h", "1", "--threads", "1"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const Json j = r.json();
    EXPECT_EQ(j["results"]["a_total"], "0");
    EXPECT_EQ(j["results"]["convex_total"], "1");
    EXPECT_EQ(j["parameters"]["rule"], "blue=[-inf,0]");
    EXPECT_EQ(j["references"]["a_over_w2h2"], "3/2");
    EXPECT_EQ(j["workers"], 1);
}

TEST(Cli, ExactBoxBreakdownSumsToTotal)
{
    const CliRun r = run({"exact-box", "--w", "4", "--h", "4", "--breakdown"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const Json res = r.json()["results"];
    EXPECT_EQ(res["a_total"], "289");
    std::int64_t sum = 0;
    for (const auto& v : res["a_by_corners"]) sum += std::stoll(v.get<std::string>());
    EXPECT_EQ(sum, 289);
    EXPECT_EQ(res["c2"], "10");
    EXPECT_EQ(res["d2"], "36");
    EXPECT_EQ(res["a_total_over_w2h2"]["exact"], "289/256");
}

TEST(Cli, ExactBoxMethodsAgree)
{
    const Json direct = run({"exact-box", "--w", "5", "--h", "3"}).json();
    const Json ie = run({"exact-box", "--w", "5", "--h", "3", "--method", "ie"}).json();
    EXPECT_EQ(direct["results"]["a_total"], ie["results"]["a_total"]);
    EXPECT_EQ(direct["results"]["convex_total"], ie["results"]["convex_total"]);
}

TEST(Cli, ExactGridSmallValues)
{
    const Json one = run({"exact-grid", "--m", "1"}).json();
    EXPECT_EQ(one["results"]["total_quadruples"], "1");
    EXPECT_EQ(one["results"]["convex"], "1");
    EXPECT_EQ(one["results"]["mono"], "0");
    const Json two = run({"exact-grid", "--m", "2", "--method", "per-box"}).json();
    EXPECT_EQ(two["results"]["total_quadruples"], "126");
    EXPECT_EQ(two["results"]["convex"], "70");
    EXPECT_EQ(two["results"]["mono"], "15");
    EXPECT_EQ(two["references"]["p_mono"], "1/4");
    EXPECT_EQ(two["references"]["p_convex"], "25/36");
    const Json other = run({"exact-grid", "--m", "2", "--rule", "blue=(-1,1)"}).json();
    EXPECT_FALSE(other["references"].contains("p_mono"));
}

TEST(Cli, MonteCarloGolden)
{
    const CliRun r = run({"mc", "--samples", "1000000", "--seed", "42", "--threads", "2"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const Json j = r.json();
    EXPECT_EQ(j["results"]["p_convex"]["hits"], "694822");
    EXPECT_EQ(j["results"]["p_mono"]["hits"], "250721");
    EXPECT_EQ(j["results"]["p_mono"]["n"], "1000000");
    EXPECT_EQ(j["parameters"]["seed"], "42");
    EXPECT_EQ(j["references"]["p_mono"], "1/4");
    EXPECT_LT(std::abs(j["results"]["z_mono"].get<double>()), 4.0);
}

TEST(Cli, MonteCarloAllBlueRule)
{
    const Json j = run({"mc", "--samples", "100000", "--rule", "blue=(-inf,inf)"}).json();
    EXPECT_EQ(j["results"]["p_mono"]["hits"], j["results"]["p_convex"]["hits"]);
    EXPECT_FALSE(j["results"].contains("z_mono"));
}

TEST(Cli, MonteCarloGraphWithOracle)
{
    const CliRun r = run({"mc", "--samples", "1000", "--n-points", "8", "--trials", "50", "--oracle"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const Json j = r.json();
    EXPECT_TRUE(j["results"]["graph"]["oracle_checked"].get<bool>());
    EXPECT_EQ(j["references"]["expected_cr"], "875/18");
    EXPECT_EQ(j["references"]["expected_cr_chi"], "35/2");
}

TEST(Cli, SweepCsvSingleRule)
{
    const CliRun r = run({"sweep", "--samples", "50000", "--rule", "blue=[-inf,0]"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "rule,p_mono,se,delta_vs_baseline,paired_se,z");
    EXPECT_EQ(lines[1].rfind("\"blue=[-inf,0]\",", 0), 0u) << lines[1];
    EXPECT_NE(lines[1].find(",0,0,0"), std::string::npos) << lines[1];
}

TEST(Cli, SweepFromRulesFileAndGrid)
{
    const auto path = temp_file("rules.txt", "# baseline\nblue=[-inf,0]\nblue=(-1,1)\nred=[0,inf];vertical=red\n");
    const CliRun r = run({"sweep", "--samples", "50000", "--rules-file", path.string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(split_lines(r.out).size(), 4u);
    const CliRun g = run({"sweep", "--samples", "20000", "--grid", "-1:1:3"});
    ASSERT_EQ(g.code, cli::kExitOk) << g.err;
    EXPECT_EQ(split_lines(g.out).size(), 5u);
    std::filesystem::remove(path);
}

TEST(Cli, SweepMalformedRulesFileNamesTheLine)
{
    const auto path = temp_file("bad_rules.txt", "blue=[-inf,0]\nblue=[0,\n");
    const CliRun r = run({"sweep", "--samples", "100", "--rules-file", path.string()});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
    std::filesystem::remove(path);
}

TEST(Cli, SweepJson)
{
    const CliRun r = run({"sweep", "--samples", "30000", "--rule", "blue=[-inf,0]", "--rule", "blue=(-1,1)", "--format", "json"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const Json rows = r.json()["results"]["rows"];
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1]["rule"], "blue=(-1,1)");
    EXPECT_EQ(rows[0]["delta_vs_baseline"], 0.0);
}

TEST(Cli, OutFileRoundTripsRunReport)
{
    const auto path = temp_file("report.json");
    const CliRun r = run({"exact-grid", "--m", "3", "--out", path.string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    const Json j = Json::parse(in);
    const RunReport report = j.get<RunReport>();
    EXPECT_EQ(report.command, "quadchroma exact-grid --m 3 --out " + path.string());
    EXPECT_EQ(report.results["mono"], "294");
    EXPECT_EQ(Json(report), j);
    EXPECT_EQ(Json(report).get<RunReport>(), report);
    std::filesystem::remove(path);
}

TEST(Cli, ThreadsFromEnvironment)
{
    ::setenv("QUADCHROMA_THREADS", "3", 1);
    EXPECT_EQ(run({"exact-grid", "--m", "2"}).json()["workers"], 3);
    EXPECT_EQ(run({"exact-grid", "--m", "2", "--threads", "2"}).json()["workers"], 2);
    ::setenv("QUADCHROMA_THREADS", "many", 1);
    EXPECT_EQ(run({"exact-grid", "--m", "2"}).code, cli::kExitUsage);
    ::unsetenv("QUADCHROMA_THREADS");
    EXPECT_GE(run({"exact-grid", "--m", "2"}).json()["workers"].get<unsigned>(), 1u);
}
