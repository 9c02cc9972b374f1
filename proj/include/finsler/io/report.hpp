#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "finsler/classify/defect.hpp"
#include "finsler/classify/rationality.hpp"

namespace finsler::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kEngineVersion = "0.1.0";

// 17 significant digits: every double value in text output round-trips
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json defect_report_json(const classify::DefectReport& rep, std::uint64_t seed) {
    json j;
    j["property"] = classify::to_string(rep.property);
    json params = json::object();
    for (const auto& [k, v] : rep.best_fit_params) params[k] = v;
    j["params"] = params;
    j["residual"] = rep.residual;
    j["tol"] = rep.tol;
    j["verdict"] = rep.holds ? "holds" : "fails";
    j["n_samples"] = rep.n_samples;
    j["seed"] = seed;
    if (rep.conclusion_residual) j["conclusion_residual"] = *rep.conclusion_residual;
    return j;
}

inline json rationality_row_json(const classify::RationalityRow& row) {
    json j;
    j["object"] = row.object;
    j["m"] = row.m_tested;
    j["certificate"] = ratfun::to_string(row.certificate);
    j["expected_condition"] = row.expected_condition;
    j["expected"] = row.expected_rational ? "rational" : "irrational";
    j["match"] = row.matches();
    return j;
}

// Top-level report shape shared by every subcommand:
// { command, config, results: [...], verdict, version }
inline json make_report(const std::string& command, json config_echo, json results,
                        bool verdict) {
    json j;
    j["command"] = command;
    j["config"] = std::move(config_echo);
    j["results"] = std::move(results);
    j["verdict"] = verdict ? "holds" : "fails";
    j["version"] = kEngineVersion;
    return j;
}

} // namespace finsler::io
