// Command-line front end: ingest metric configurations, run computations
// and certifications, verify the built-in example spacetimes, and emit
// human-readable text plus machine-readable JSON reports.

#include <CLI11.hpp>

#include <Eigen/Dense>

#include <fstream>
#include <iostream>
#include <sstream>

#include "finsler/finsler.hpp"

using namespace finsler;
using namespace finsler::geometry;
using namespace finsler::curvature;
using namespace finsler::classify;
using backend::ExactFrame;
using backend::NumericFrame;
using autodiff::EvalPoint;
using io::fmt17;
using io::json;

namespace {

struct Options {
    std::string metric_path;
    std::string builtin;
    double m = 0; // 0: keep the builtin's default
    std::uint64_t seed = 1;
    int samples = 32;
    double atol = 1e-12, rtol = 1e-9;
    std::string backend = "numeric"; // numeric | exact | both
    std::string output = "text";     // text | json
    std::string out_path;
    std::string at;   // "x=..,..;y=..,.."
    std::string at_x; // "..,.."
};

Param param_from_m(double m) {
    double ip;
    if (std::modf(m, &ip) == 0.0) return Param{static_cast<long>(ip)};
    return Param{m};
}

MetricSpec resolve_metric(const Options& o) {
    const double m = o.m;
    auto mp = [&](double dflt) { return param_from_m(m == 0 ? dflt : m); };
    if (!o.builtin.empty()) {
        const std::string& b = o.builtin;
        if (b == "example1-flat-anisotropic") return example1_flat_anisotropic(mp(2));
        if (b == "example2-vsi") return example2_vsi(mp(2));
        if (b == "example2-ppwave") return example2_ppwave(mp(2));
        if (b == "example3-cosmological") return example3_cosmological_numeric(mp(2), 1.0);
        if (b == "example3-cosmological-exact") {
            Param pm = mp(2);
            return example3_cosmological_exact(pm, rat(1), pm.as_integer());
        }
        if (b == "euclidean-fixture" || b == "minkowski-fixture") {
            Family fam;
            fam.kind = FamilyKind::GeneralizedMKropina;
            fam.m = mp(2);
            fam.c = Param{1L};
            fam.r = Param{1L};
            return b == "euclidean-fixture" ? euclidean_poly_fixture(fam)
                                            : minkowski_poly_fixture(fam);
        }
        if (b == "round-sphere") return round_sphere(3);
        if (b == "sphere-product") return sphere_product_fixture();
        throw ConfigError("unknown builtin '" + b + "'");
    }
    if (o.metric_path.empty())
        throw ConfigError("either --metric <file> or --builtin <name> is required");
    std::ifstream in(o.metric_path);
    if (!in) throw ConfigError("cannot open metric file '" + o.metric_path + "'");
    json j = json::parse(in, nullptr, true, true);
    MetricSpec spec = io::metric_from_json(j);
    if (m != 0) spec.family.m = param_from_m(m);
    return spec;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(rat_parse(item));
    return out;
}

// "x=0,0;y=1,1"
EvalPoint parse_point(const std::string& s) {
    EvalPoint p;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError("point syntax: x=..,..;y=..,..");
        std::string key = part.substr(0, eq), val = part.substr(eq + 1);
        if (key == "x")
            p.x = parse_doubles(val);
        else if (key == "y")
            p.y = parse_doubles(val);
        else
            throw ConfigError("point syntax: x=..,..;y=..,..");
    }
    return p;
}

// default chart points for the builtins (conic y supplied per use)
std::vector<double> default_x(const MetricSpec& spec) {
    if (spec.name == "example3-cosmological") return {1.0, 0.2, 0.3, 0.4};
    if (spec.name == "example2-vsi" || spec.name == "example2-ppwave")
        return {0.0, 0.0, 1.0, 1.0};
    if (spec.name == "euclidean-fixture" || spec.name == "minkowski-fixture")
        return {0.5, 0.25};
    return std::vector<double>(spec.n, 0.1);
}

std::vector<Rational> default_x_exact(const MetricSpec& spec) {
    if (spec.name == "example3-cosmological") return {rat(1), rat(1, 5), rat(3, 10), rat(2, 5)};
    if (spec.name == "example2-vsi" || spec.name == "example2-ppwave")
        return {rat(0), rat(0), rat(1), rat(1)};
    if (spec.name == "euclidean-fixture" || spec.name == "minkowski-fixture")
        return {rat(1, 2), rat(1, 4)};
    std::vector<Rational> out(spec.n, rat(1, 10));
    return out;
}

int default_sigma(const MetricSpec& spec) {
    if (spec.name == "example1-flat-anisotropic" || spec.name == "example2-vsi" ||
        spec.name == "example2-ppwave")
        return -1;
    return +1;
}

void emit(const Options& o, const json& report, const std::string& text) {
    std::string payload = o.output == "json" ? report.dump(2) + "\n" : text;
    if (!o.out_path.empty()) {
        std::ofstream out(o.out_path);
        if (!out) throw ConfigError("cannot write to '" + o.out_path + "'");
        out << payload;
    } else {
        std::cout << payload;
    }
}

// Quadratic-fit oracle for the Berwald property: G^i(x, .) is sampled over
// fiber directions and fitted by a pure quadratic form; the sup fit
// residual is zero iff the spray is quadratic in y.
double berwald_fit_residual(const MetricSpec& spec, const std::vector<double>& x,
                            std::uint64_t seed, int directions = 24) {
    const int n = spec.n;
    SampleSpec ss;
    ss.seed = seed;
    ss.count = directions;
    ss.x_fixed = x;
    auto pts = sample_conic_points(spec, ss);
    const int nq = n * (n + 1) / 2;
    double worst = 0;
    std::vector<std::vector<double>> G(pts.size(), std::vector<double>(n));
    for (std::size_t p = 0; p < pts.size(); ++p) {
        NumericFrame fr(spec, pts[p]);
        auto ft = fundamental_tensors(fr);
        auto sp = spray(fr, ft);
        for (int i = 0; i < n; ++i) G[p][i] = sp.G[i].value();
    }
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd A(pts.size(), nq);
        Eigen::VectorXd rhs(pts.size());
        for (std::size_t p = 0; p < pts.size(); ++p) {
            int c = 0;
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b) A(p, c++) = pts[p].y[a] * pts[p].y[b];
            rhs(p) = G[p][i];
        }
        Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
        double scale = 1.0;
        for (std::size_t p = 0; p < pts.size(); ++p) scale = std::max(scale, std::abs(rhs(p)));
        worst = std::max(worst, (A * sol - rhs).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

json claim_json(const std::string& name, bool holds, const std::string& detail) {
    json j;
    j["claim"] = name;
    j["verdict"] = holds ? "holds" : "fails";
    j["detail"] = detail;
    return j;
}

int cmd_verify_example(const Options& o) {
    MetricSpec spec = resolve_metric(o);
    spec.validate();
    const bool want_exact = o.backend == "exact" || o.backend == "both";
    const bool want_numeric = o.backend == "numeric" || o.backend == "both";
    json results = json::array();
    std::ostringstream text;
    bool all = true;
    auto add = [&](const std::string& name, bool holds, const std::string& detail) {
        results.push_back(claim_json(name, holds, detail));
        text << (holds ? "  ok   " : "  FAIL ") << name << ": " << detail << "\n";
        all &= holds;
    };
    text << "verify-example " << spec.name << " (m = " << fmt17(spec.family.m_eff().d)
         << ")\n";

    const bool exact_able = spec.exact_available();
    const int sigma = default_sigma(spec);

    if (spec.name == "example3-cosmological" && want_numeric) {
        // einstein_fit at several cosmic times: K = 0, theta = 0
        bool holds = true;
        double worst_param = 0, worst_res = 0;
        for (double t : {0.6, 0.9, 1.0, 1.3, 1.7}) {
            std::vector<double> x{t, 0.2, 0.3, 0.4};
            SampleSpec ss;
            ss.seed = o.seed;
            ss.count = std::max(o.samples, spec.n + 4);
            ss.x_fixed = x;
            auto pts = sample_conic_points(spec, ss);
            std::vector<std::vector<double>> ys;
            for (auto& p : pts) ys.push_back(p.y);
            auto fit = einstein_fit(spec, x, ys, 1e-8);
            worst_res = std::max(worst_res, fit.residual);
            worst_param = std::max(worst_param, std::abs(fit.K));
            for (double th : fit.theta) worst_param = std::max(worst_param, std::abs(th));
            holds &= fit.residual <= 1e-8 && fit.ricci_flat;
        }
        add("ricci-flat (einstein fit: K = 0, theta = 0)", holds,
            "max fitted |K|,|theta| = " + fmt17(worst_param) +
                ", fit residual = " + fmt17(worst_res));
    }

    if (exact_able && want_exact) {
        ExactFrame fr(spec, default_x_exact(spec), sigma);
        auto ft = fundamental_tensors(fr);
        auto sp = spray(fr, ft);
        auto tw = curvature_tower(fr, ft, sp);
        bool ric0 = tw.Ric.is_zero();
        add("Ric = 0 (exact)", ric0,
            ric0 ? "Ricci scalar vanishes identically at the chart point"
                 : "exact residual Ric = " + tw.Ric.value().str());
        if (spec.n == 4) {
            auto res = field_residuals(fr, ft, tw, fr.constant(0L));
            bool pw0 = res.pw.is_zero();
            add("vacuum field equation (exact)", pw0,
                pw0 ? "residual vanishes identically"
                    : "exact residual = " + res.pw.value().str());
        }
    }

    if ((spec.name == "example2-vsi" || spec.name == "example2-ppwave") && want_numeric) {
        double worst = 0;
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> ub(-0.4, 0.4);
        int bases = 20;
        for (int b = 0; b < bases; ++b) {
            std::vector<double> x{ub(rng), ub(rng), 1.0 + ub(rng), 1.0 + ub(rng)};
            worst = std::max(worst, berwald_fit_residual(spec, x, o.seed + b, 24));
        }
        add("Berwald type (quadratic fit of G over directions)", worst <= 1e-9,
            "max fit residual over " + std::to_string(bases) +
                " base points = " + fmt17(worst));
    }

    if (want_numeric && spec.name != "example3-cosmological") {
        // numeric Ricci spot check over the cone
        SampleSpec ss;
        ss.seed = o.seed;
        ss.count = std::min(o.samples, 50);
        ss.x_box = 0.4;
        if (spec.name == "example2-vsi" || spec.name == "example2-ppwave")
            ss.x_fixed = {};
        double worst = 0;
        try {
            auto pts = sample_conic_points(spec, ss);
            for (const auto& at : pts) {
                NumericFrame fr(spec, at, Tolerance{o.atol, o.rtol});
                auto ft = fundamental_tensors(fr);
                auto sp = spray(fr, ft);
                worst = std::max(worst, std::abs(ricci_scalar(fr, sp).value()) /
                                            std::max(1.0, std::abs(ft.F2.value())));
            }
            add("Ric = 0 (numeric spot check)", worst <= 1e-8,
                "max |Ric|/F^2 over " + std::to_string(pts.size()) +
                    " conic points = " + fmt17(worst));
        } catch (const EmptyCone& e) {
            add("Ric = 0 (numeric spot check)", false, e.what());
        }
    }

    json report = io::make_report("verify-example", io::metric_to_json_safe(spec), results, all);
    emit(o, report, text.str());
    return all ? 0 : 1;
}

int cmd_rationality_table(const Options& o) {
    MetricSpec spec = resolve_metric(o);
    std::vector<Rational> x0 =
        o.at_x.empty() ? default_x_exact(spec) : parse_rationals(o.at_x);
    auto rows = rationality_table(spec, x0, default_sigma(spec));
    json results = json::array();
    std::ostringstream text;
    bool all = true;
    text << "rationality table, m = " << spec.family.m_eff().as_integer() << "\n";
    for (const auto& row : rows) {
        results.push_back(io::rationality_row_json(row));
        all &= row.matches();
        text << (row.matches() ? "  ok   " : "  FAIL ") << row.object << ": "
             << ratfun::to_string(row.certificate) << " (table: " << row.expected_condition
             << ")\n";
    }
    json report =
        io::make_report("rationality-table", io::metric_to_json_safe(spec), results, all);
    emit(o, report, text.str());
    return all ? 0 : 1;
}

int cmd_classify(const Options& o, const std::string& property) {
    MetricSpec spec = resolve_metric(o);
    Property prop;
    if (property == "isotropic-mean-berwald") prop = Property::IsotropicMeanBerwald;
    else if (property == "isotropic-mean-landsberg") prop = Property::IsotropicMeanLandsberg;
    else if (property == "relatively-isotropic-landsberg")
        prop = Property::RelativelyIsotropicLandsberg;
    else if (property == "isotropic-s-curvature") prop = Property::IsotropicSCurvature;
    else if (property == "weak-einstein") prop = Property::WeakEinstein;
    else if (property == "einstein") prop = Property::Einstein;
    else if (property == "ricci-flat") prop = Property::RicciFlat;
    else if (property == "almost-vanishing-h") prop = Property::AlmostVanishingH;
    else if (property == "almost-isotropic-flag") prop = Property::AlmostIsotropicFlag;
    else throw ConfigError("unknown property '" + property + "'");

    std::vector<double> x = o.at_x.empty()
                                ? default_x(spec)
                                : [&] {
                                      std::vector<double> v;
                                      for (auto& q : parse_rationals(o.at_x))
                                          v.push_back(rat_to_double(q));
                                      return v;
                                  }();
    SampleSpec ss;
    ss.seed = o.seed;
    ss.count = o.samples;
    ss.x_fixed = x;
    auto samples = sample_conic_points(spec, ss);
    auto rep = defect(prop, spec, samples, o.rtol > 0 ? std::max(o.rtol, 1e-12) : 1e-8);
    json results = json::array();
    results.push_back(io::defect_report_json(rep, o.seed));
    std::ostringstream text;
    text << "classify " << to_string(prop) << ": " << (rep.holds ? "holds" : "fails")
         << "  residual = " << fmt17(rep.residual) << "  tol = " << fmt17(rep.tol) << "\n";
    for (const auto& [k, v] : rep.best_fit_params)
        text << "  " << k << " = " << fmt17(v) << "\n";
    if (rep.conclusion_residual)
        text << "  conclusion residual = " << fmt17(*rep.conclusion_residual) << "\n";
    json report =
        io::make_report("classify", io::metric_to_json_safe(spec), results, rep.holds);
    emit(o, report, text.str());
    return rep.holds ? 0 : 1;
}

int cmd_field_residual(const Options& o, double ravg, bool estimate_ravg) {
    MetricSpec spec = resolve_metric(o);
    if (spec.n != 4) throw DimensionMismatch("the field equations are stated for n = 4");
    EvalPoint at = o.at.empty()
                       ? EvalPoint{default_x(spec), {1.0, 0.2, 0.1, 0.05}}
                       : parse_point(o.at);
    double used_ravg = ravg;
    json results = json::array();
    std::ostringstream text;
    if (estimate_ravg) {
        auto est = indicatrix_average(spec, at.x, o.seed, o.samples);
        used_ravg = est.mean;
        json je;
        je["indicatrix_average"] = est.mean;
        je["std_error"] = est.std_error;
        je["accepted"] = est.accepted;
        results.push_back(je);
        text << "indicatrix average of Ric = " << fmt17(est.mean) << " +- "
             << fmt17(est.std_error) << " (" << est.accepted << " samples)\n";
    }
    NumericFrame fr(spec, at, Tolerance{o.atol, o.rtol});
    auto ft = fundamental_tensors(fr);
    auto sp = spray(fr, ft);
    auto tw = curvature_tower(fr, ft, sp);
    auto res = field_residuals(fr, ft, tw, fr.constant(0L) + used_ravg);
    double scale = std::max({1.0, std::abs(ft.F2.value()), std::abs(2 * tw.Ric.value())});
    bool holds = std::abs(res.pw.value()) <= o.atol + o.rtol * scale;
    json jr;
    jr["pw_residual"] = res.pw.value();
    jr["cs_residual"] = res.cs.value();
    jr["r_avg"] = used_ravg;
    jr["verdict"] = holds ? "holds" : "fails";
    results.push_back(jr);
    text << "pw_residual = " << fmt17(res.pw.value())
         << "\ncs_residual = " << fmt17(res.cs.value()) << "\nverdict: "
         << (holds ? "holds" : "fails") << "\n";
    json report =
        io::make_report("field-residual", io::metric_to_json_safe(spec), results, holds);
    emit(o, report, text.str());
    return holds ? 0 : 1;
}

int cmd_compute(const Options& o, const std::string& object) {
    MetricSpec spec = resolve_metric(o);
    EvalPoint at = o.at.empty() ? EvalPoint{default_x(spec), std::vector<double>(spec.n, 1.0)}
                                : parse_point(o.at);
    NumericFrame fr(spec, at, Tolerance{o.atol, o.rtol});
    auto ft = fundamental_tensors(fr);
    json results = json::array();
    std::ostringstream text;
    json jt;
    jt["F"] = ft.F.value();
    jt["F2"] = ft.F2.value();
    jt["det_g"] = ft.det_g.value();
    jt["eta"] = ft.eta.value();
    text << "F = " << fmt17(ft.F.value()) << "\ndet g = " << fmt17(ft.det_g.value())
         << "\neta = " << fmt17(ft.eta.value()) << "\n";
    json gj = json::array();
    for (int i = 0; i < spec.n; ++i) {
        json row = json::array();
        for (int j = 0; j < spec.n; ++j) row.push_back(ft.g[i][j].value());
        gj.push_back(row);
    }
    jt["g"] = gj;
    results.push_back(jt);
    if (object == "spray" || object == "tower" || object == "all") {
        auto sp = spray(fr, ft);
        json js;
        json gv = json::array();
        for (int i = 0; i < spec.n; ++i) gv.push_back(sp.G[i].value());
        js["G"] = gv;
        js["r00"] = sp.r00.value();
        js["alpha_Q"] = sp.alpha_Q.value();
        text << "G =";
        for (int i = 0; i < spec.n; ++i) text << " " << fmt17(sp.G[i].value());
        text << "\n";
        results.push_back(js);
        if (object == "tower" || object == "all") {
            auto tw = curvature_tower(fr, ft, sp);
            json jc;
            jc["Ric"] = tw.Ric.value();
            double emax = 0, jmax = 0, hmax = 0;
            for (int i = 0; i < spec.n; ++i) {
                jmax = std::max(jmax, std::abs(tw.J[i].value()));
                for (int j = 0; j < spec.n; ++j) {
                    emax = std::max(emax, std::abs(tw.E[i][j].value()));
                    hmax = std::max(hmax, std::abs(tw.H[i][j].value()));
                }
            }
            jc["max_abs_E"] = emax;
            jc["max_abs_J"] = jmax;
            jc["max_abs_H"] = hmax;
            text << "Ric = " << fmt17(tw.Ric.value()) << "\nmax|E| = " << fmt17(emax)
                 << "  max|J| = " << fmt17(jmax) << "  max|H| = " << fmt17(hmax) << "\n";
            results.push_back(jc);
        }
    }
    json report = io::make_report("compute", io::metric_to_json_safe(spec), results, true);
    emit(o, report, text.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor calculus and certification engine for generalized m-Kropina metrics"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--metric", o.metric_path, "metric configuration JSON file");
    app.add_option("--builtin", o.builtin, "built-in metric name");
    app.add_option("--m", o.m, "override the family exponent m");
    app.add_option("--seed", o.seed, "random seed for sampling");
    app.add_option("--samples", o.samples, "sample count");
    app.add_option("--atol", o.atol, "absolute tolerance");
    app.add_option("--rtol", o.rtol, "relative tolerance");
    app.add_option("--backend", o.backend, "numeric | exact | both");
    app.add_option("--output", o.output, "text | json");
    app.add_option("--out", o.out_path, "write the report to this file");
    app.add_option("--at", o.at, "evaluation point 'x=..,..;y=..,..'");
    app.add_option("--at-x", o.at_x, "base point '..,..' (rationals allowed)");

    auto* verify = app.add_subcommand("verify-example", "check a built-in example's claims");
    std::string example_id;
    verify->add_option("example", example_id, "builtin id")->required();
    verify->fallthrough();

    auto* table = app.add_subcommand("rationality-table",
                                     "exact rationality certificates for the object table");
    table->fallthrough();

    auto* cls = app.add_subcommand("classify", "defect functional for a metric property");
    std::string property;
    cls->add_option("--property", property, "property name")->required();
    cls->fallthrough();

    auto* fres = app.add_subcommand("field-residual", "field equation residuals at a point");
    double ravg = 0;
    bool estimate = false;
    fres->add_option("--ravg", ravg, "indicatrix average of Ric (user constant)");
    fres->add_flag("--estimate-ravg", estimate, "Monte-Carlo estimate of the average");
    fres->fallthrough();

    auto* comp = app.add_subcommand("compute", "evaluate geometric objects at a point");
    std::string object = "all";
    comp->add_option("--object", object, "fundamental | spray | tower | all");
    comp->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            o.builtin = example_id;
            return cmd_verify_example(o);
        }
        if (table->parsed()) return cmd_rationality_table(o);
        if (cls->parsed()) return cmd_classify(o, property);
        if (fres->parsed()) return cmd_field_residual(o, ravg, estimate);
        if (comp->parsed()) return cmd_compute(o, object);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
