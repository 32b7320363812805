#ifndef QUADCHROMA_REPORT_HPP
#define QUADCHROMA_REPORT_HPP

// Machine-readable run reports. Exact integers are carried as decimal strings
// and rationals as "p/q" so nothing exact passes through a double.

#include <string>

#include <json.hpp>

#include "analytic.hpp"
#include "int128.hpp"
#include "montecarlo.hpp"
#include "rule_syntax.hpp"

namespace quadchroma {

using Json = nlohmann::ordered_json;

struct RunReport {
    std::string command;
    Json parameters = Json::object();
    Json results = Json::object();
    Json references = Json::object();
    double wall_time_s = 0;
    unsigned workers = 1;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline void to_json(Json& j, const RunReport& r)
{
    j = Json{{"command", r.command},       {"parameters", r.parameters}, {"results", r.results},
             {"references", r.references}, {"wall_time_s", r.wall_time_s}, {"workers", r.workers}};
}

inline void from_json(const Json& j, RunReport& r)
{
    j.at("command").get_to(r.command);
    r.parameters = j.at("parameters");
    r.results = j.at("results");
    r.references = j.at("references");
    j.at("wall_time_s").get_to(r.wall_time_s);
    j.at("workers").get_to(r.workers);
}

inline Json exact(int128 v) { return to_string(v); }

inline Json exact(const ExactRational& r) { return r.str(); }

inline Json estimate_json(const Estimate& e)
{
    return Json{{"p_hat", e.p_hat}, {"se", e.se}, {"hits", std::to_string(e.hits)}, {"n", std::to_string(e.n)}};
}

} // namespace quadchroma

#endif
