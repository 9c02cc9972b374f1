#pragma once

#include <json.hpp>

#include <string>

#include "finsler/geometry/metric_spec.hpp"
#include "finsler/io/expr.hpp"

namespace finsler::io {

using geometry::Family;
using geometry::FamilyKind;
using geometry::MetricSpec;
using geometry::Param;
using json = nlohmann::ordered_json;

inline Param param_from_json(const json& j, const char* what) {
    if (j.is_string()) return Param(rat_parse(j.get<std::string>()));
    if (j.is_number_integer()) return Param(static_cast<long>(j.get<long long>()));
    if (j.is_number_float()) return Param(j.get<double>());
    throw ConfigError(std::string("family parameter '") + what +
                      "' must be a number or a rational string");
}

inline json param_to_json(const Param& p) {
    if (p.q) {
        if (p.is_integer()) return json(static_cast<long long>(p.as_integer()));
        return json(rat_to_string(*p.q));
    }
    return json(p.d);
}

inline FamilyKind family_kind_from_string(const std::string& s) {
    if (s == "generalized-m-kropina") return FamilyKind::GeneralizedMKropina;
    if (s == "m-kropina") return FamilyKind::MKropina;
    if (s == "kropina") return FamilyKind::Kropina;
    if (s == "pseudo-riemannian") return FamilyKind::PseudoRiemannian;
    throw ConfigError("unknown metric family '" + s + "'");
}

// Metric configuration document:
// { "dimension": n, "alpha": [n rows of n expressions], "beta": [n],
//   "family": {"kind", "m", "c", "r", "sign"}, "name"? }
// Rational coefficients round-trip bit-exactly through the expression
// strings.
inline MetricSpec metric_from_json(const json& j) {
    MetricSpec spec;
    if (!j.is_object()) throw ConfigError("metric config must be a JSON object");
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw ConfigError("metric config needs an integer 'dimension'");
    spec.n = j["dimension"].get<int>();
    if (spec.n < 2 || spec.n > ratfun::kMaxVars / 2)
        throw ConfigError("dimension must be between 2 and 4");

    auto field = [&](const json& cell) {
        if (cell.is_string()) return geometry::CoeffField(parse_poly(cell.get<std::string>(), spec.n));
        if (cell.is_number_integer())
            return geometry::CoeffField(ratfun::MultiPoly::constant(
                spec.n, spec.n, rat(cell.get<long long>())));
        throw ConfigError("coefficient entries must be expression strings or integers");
    };

    if (!j.contains("alpha") || !j["alpha"].is_array() ||
        static_cast<int>(j["alpha"].size()) != spec.n)
        throw ConfigError("'alpha' must be an n x n array");
    for (const auto& row : j["alpha"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != spec.n)
            throw ConfigError("'alpha' must be an n x n array");
        for (const auto& cell : row) spec.alpha.push_back(field(cell));
    }
    if (!j.contains("beta") || !j["beta"].is_array() ||
        static_cast<int>(j["beta"].size()) != spec.n)
        throw ConfigError("'beta' must have n entries");
    for (const auto& cell : j["beta"]) spec.beta.push_back(field(cell));

    if (!j.contains("family") || !j["family"].is_object())
        throw ConfigError("metric config needs a 'family' object");
    const json& f = j["family"];
    spec.family.kind = family_kind_from_string(f.value("kind", std::string("kropina")));
    if (f.contains("m")) spec.family.m = param_from_json(f["m"], "m");
    if (f.contains("c")) spec.family.c = param_from_json(f["c"], "c");
    if (f.contains("r")) spec.family.r = param_from_json(f["r"], "r");
    spec.family.sign = f.value("sign", 1);
    if (j.contains("name")) spec.name = j["name"].get<std::string>();

    spec.validate();
    return spec;
}

inline json metric_to_json(const MetricSpec& spec) {
    json j;
    j["dimension"] = spec.n;
    json alpha = json::array();
    for (int i = 0; i < spec.n; ++i) {
        json row = json::array();
        for (int k = 0; k < spec.n; ++k) {
            const auto& f = spec.a(i, k);
            if (!f.poly) throw ConfigError("closure-backed metrics cannot be serialized");
            row.push_back(f.poly->str());
        }
        alpha.push_back(row);
    }
    j["alpha"] = alpha;
    json beta = json::array();
    for (const auto& f : spec.beta) {
        if (!f.poly) throw ConfigError("closure-backed metrics cannot be serialized");
        beta.push_back(f.poly->str());
    }
    j["beta"] = beta;
    json fam;
    switch (spec.family.kind) {
        case FamilyKind::GeneralizedMKropina: fam["kind"] = "generalized-m-kropina"; break;
        case FamilyKind::MKropina: fam["kind"] = "m-kropina"; break;
        case FamilyKind::Kropina: fam["kind"] = "kropina"; break;
        case FamilyKind::PseudoRiemannian: fam["kind"] = "pseudo-riemannian"; break;
    }
    fam["m"] = param_to_json(spec.family.m);
    fam["c"] = param_to_json(spec.family.c);
    fam["r"] = param_to_json(spec.family.r);
    fam["sign"] = spec.family.sign;
    j["family"] = fam;
    if (!spec.name.empty()) j["name"] = spec.name;
    return j;
}

// Like metric_to_json, but closure-backed builtins degrade to a summary
// echo instead of failing.
inline json metric_to_json_safe(const MetricSpec& spec) {
    if (spec.all_polynomial()) return metric_to_json(spec);
    json j;
    j["dimension"] = spec.n;
    j["name"] = spec.name.empty() ? "(unnamed)" : spec.name;
    j["coefficients"] = "numeric closures";
    json fam;
    fam["kind"] = to_string(spec.family.kind);
    fam["m"] = param_to_json(spec.family.m);
    fam["c"] = param_to_json(spec.family.c);
    fam["r"] = param_to_json(spec.family.r);
    fam["sign"] = spec.family.sign;
    j["family"] = fam;
    return j;
}

} // namespace finsler::io
