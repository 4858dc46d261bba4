#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "sortition/bounds.hpp"
#include "sortition/caps.hpp"
#include "sortition/exact.hpp"
#include "sortition/metrics.hpp"
#include "sortition/montecarlo.hpp"

namespace sortition {

using nlohmann::json;

// {"num": ..., "den": ..., "value": number | "inf"} — infinity is an explicit
// token, never a float special.
inline json to_json(const CostRatio& r) {
    json out;
    out["num"] = r.numerator;
    out["den"] = r.denominator;
    if (r.infinite)
        out["value"] = "inf";
    else
        out["value"] = r.value;
    return out;
}

inline json to_json(const EvalReport& r) {
    json out;
    out["expected_cost"] = r.expected_cost;
    out["optimal_cost"] = r.optimal_cost;
    out["ratio"] = to_json(r.ratio);
    out["method"] = eval_method_name(r.method);
    json detail = json::object();
    switch (r.method) {
        case EvalMethod::exact_hypergeometric:
            detail["columns"] = r.columns;
            break;
        case EvalMethod::exact_enumeration:
            detail["committees"] = r.committees;
            break;
        case EvalMethod::monte_carlo:
            detail["samples"] = r.samples;
            detail["seed"] = r.seed;
            detail["std_error"] = r.std_error;
            detail["ci95"] = {r.ci_low, r.ci_high};
            break;
    }
    out["detail"] = detail;
    return out;
}

inline json to_json(const MCEstimate& e) {
    json out;
    out["mean"] = e.mean;
    out["std_error"] = e.std_error;
    out["samples"] = e.samples;
    out["ci95"] = {e.ci_low, e.ci_high};
    out["seed"] = e.seed;
    return out;
}

inline json to_json(const BoundReport& r) {
    json out;
    out["name"] = r.name;
    json params = json::object();
    for (const auto& [key, value] : r.params) params[key] = value;
    out["params"] = params;
    out["bound_value"] = r.bound_value;
    out["side"] = r.upper ? "upper" : "lower";
    if (r.compared_to) out["compared_to"] = *r.compared_to;
    if (r.satisfied) out["satisfied"] = *r.satisfied;
    return out;
}

inline json to_json(const Caps& caps) {
    json out;
    out["enumeration_cap"] = caps.enumeration_cap;
    out["exact_binomial_max_n"] = caps.exact_binomial_max_n;
    out["equidistant_max_n"] = caps.equidistant_max_n;
    out["two_cluster_max_attempts"] = caps.two_cluster_max_attempts;
    return out;
}

inline Caps caps_from_json(const json& j) {
    Caps caps;
    if (j.contains("enumeration_cap")) caps.enumeration_cap = j["enumeration_cap"].get<long long>();
    if (j.contains("exact_binomial_max_n"))
        caps.exact_binomial_max_n = j["exact_binomial_max_n"].get<int>();
    if (j.contains("equidistant_max_n")) caps.equidistant_max_n = j["equidistant_max_n"].get<int>();
    if (j.contains("two_cluster_max_attempts"))
        caps.two_cluster_max_attempts = j["two_cluster_max_attempts"].get<int>();
    return caps;
}

inline Caps read_caps_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open caps config: " + path);
    json j;
    in >> j;
    return caps_from_json(j);
}

}  // namespace sortition
