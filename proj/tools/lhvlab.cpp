// lhvlab: command-line front end for the hidden-variable detection models.
//
//   lhvlab sweep    --theory proj --method closed --out curve.csv --plot fig.svg
//   lhvlab bell     --theory proj --angles 0,60,120
//   lhvlab verify   --theory pow
//   lhvlab stats    --theory pow --grid paper
//   lhvlab tradeoff --exponents 0.2:1.0:0.05
//
// Exit codes: 0 ok, 2 usage, 3 degenerate rate, 4 zero coincidences,
// 5 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lhv/lhv.hpp"

namespace {

using lhv::Angle;
using lhv::io::Method;
using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 2, kDegenerate = 3, kZeroCoincidence = 4, kVerifyFailed = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string theory = "proj";
    std::optional<double> exponent;
    std::string mode;
    std::string method = "auto";
    int theta_points = 50;
    int phi_points = 50;
    std::string grid = "full";
    std::int64_t pairs = 1'000'000;
    std::uint64_t seed = 42;
    std::string format;
    std::string out;
    std::string plot;
    bool degrees = false;
    bool radians = false;
};

lhv::TheoryConfig make_config(const Globals& g) {
    lhv::TheoryConfig cfg;
    if (g.theory == "naive") {
        cfg.density = lhv::DetectionDensity::naive();
    } else if (g.theory == "proj") {
        cfg.density = lhv::DetectionDensity::projection();
    } else if (g.theory == "pow") {
        cfg.density = lhv::DetectionDensity::signed_power_cosine(g.exponent.value_or(lhv::kInvE));
    } else if (g.theory == "custom") {
        if (!g.exponent) throw UsageError("--theory custom requires --exponent");
        cfg.density = lhv::DetectionDensity::custom_power(*g.exponent);
    } else {
        throw UsageError("unknown theory '" + g.theory + "'");
    }
    if (g.mode.empty()) {
        bool spin_source = g.theory == "naive" || g.theory == "proj";
        cfg.mode = spin_source ? lhv::CorrelationMode::Anticorrelated : lhv::CorrelationMode::Correlated;
    } else {
        cfg.mode = g.mode == "anticorr" ? lhv::CorrelationMode::Anticorrelated : lhv::CorrelationMode::Correlated;
    }
    cfg.grid = g.grid == "paper" ? lhv::GridMode::PaperHalfInterval : lhv::GridMode::FullPeriod;
    cfg.theta_points = g.theta_points;
    cfg.phi_points = g.phi_points;
    cfg.pairs_per_angle = g.pairs;
    cfg.seed = g.seed;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

Method resolve_method(const Globals& g, const lhv::TheoryConfig& cfg) {
    if (g.method == "auto") return cfg.density.has_closed_form() ? Method::Closed : Method::Quad;
    if (g.method == "closed") return Method::Closed;
    if (g.method == "quad") return Method::Quad;
    if (g.method == "dft") return Method::Dft;
    return Method::Mc;
}

double parse_angle(const std::string& text, const Globals& g) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed angle '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw UsageError("malformed angle '" + text + "'");
    return g.radians ? v : Angle::from_degrees(v).radians;
}

std::vector<Angle> parse_angles(const std::string& list, const Globals& g) {
    std::vector<Angle> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.emplace_back(parse_angle(item, g));
    if (out.size() != 3) throw UsageError("--angles needs exactly three comma-separated values");
    return out;
}

/// Spectral path restricted to the sweep's phi grid: N is a multiple of the
/// grid's step so every phi is a node.
lhv::Curve dft_sweep(const lhv::TheoryConfig& cfg) {
    const bool full = cfg.grid == lhv::GridMode::FullPeriod;
    const std::size_t base = full ? 2 * static_cast<std::size_t>(cfg.phi_points - 1) : 2 * static_cast<std::size_t>(cfg.phi_points);
    const std::size_t floor_n = std::max<std::size_t>(4, static_cast<std::size_t>(cfg.theta_points));
    const std::size_t stride = (floor_n + base - 1) / base;
    auto all = lhv::spectral::spectral_curve(cfg.density, base * stride, cfg.mode);
    lhv::Curve out;
    for (int k = 0; k < cfg.phi_points; ++k) out.push_back(all[static_cast<std::size_t>(k) * stride]);
    return out;
}

struct SweepResult {
    lhv::Curve curve;
    std::vector<lhv::mc::Estimate> estimates;
};

SweepResult compute_curve(const lhv::TheoryConfig& cfg, Method m) {
    switch (m) {
        case Method::Closed: return {lhv::closed::closed_curve(cfg), {}};
        case Method::Quad: return {lhv::quad::sweep_curve(cfg), {}};
        case Method::Dft: return {dft_sweep(cfg), {}};
        case Method::Mc: {
            auto est = lhv::mc::estimate_curve(cfg);
            return {lhv::mc::to_curve(est), est};
        }
    }
    return {};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

lhv::io::RunManifest manifest(const lhv::TheoryConfig& cfg, Method m, const std::string& command) {
    return {cfg, m, command, lhv::io::utc_timestamp()};
}

lhv::analysis::ExpectationFn expectation_fn(const lhv::TheoryConfig& cfg, Method m) {
    switch (m) {
        case Method::Closed: {
            if (!cfg.density.has_closed_form()) throw lhv::NoClosedFormError("no closed form for '" + cfg.density.name() + "'");
            return [d = cfg.density, mode = cfg.mode](Angle phi) { return lhv::closed::closed_point(d, phi, mode).e_hv; };
        }
        case Method::Quad:
            return lhv::analysis::quadrature_expectation(cfg.density, cfg.mode,
                                                         lhv::quad::QuadratureGrid::make(cfg.grid, cfg.theta_points));
        case Method::Dft: {
            constexpr std::size_t n = 720;
            auto curve = std::make_shared<lhv::Curve>(lhv::spectral::spectral_curve(cfg.density, n, cfg.mode));
            return [curve](Angle phi) {
                double r = std::fmod(phi.radians, lhv::kTwoPi);
                if (r < 0) r += lhv::kTwoPi;
                double pos = r / lhv::kTwoPi * n;
                long k = std::lround(pos);
                if (std::abs(pos - static_cast<double>(k)) > 1e-6) throw UsageError("dft path needs angles on 0.5 degree nodes");
                return (*curve)[static_cast<std::size_t>(k) % n].e_hv;
            };
        }
        case Method::Mc: break;
    }
    throw UsageError("method not supported here");
}

int cmd_sweep(const Globals& g) {
    auto cfg = make_config(g);
    auto m = resolve_method(g, cfg);
    auto res = compute_curve(cfg, m);
    auto man = manifest(cfg, m, "sweep");
    if (g.format == "json") {
        json j;
        j["manifest"] = lhv::io::manifest_json(man);
        j["points"] = lhv::io::curve_json(res.curve);
        if (!res.estimates.empty()) {
            auto se = json::array();
            for (const auto& e : res.estimates)
                se.push_back({{"se_e", e.se_e}, {"se_t", e.se_t}, {"pairs", e.batch.pairs_emitted},
                              {"coincidences", e.batch.coincidences}});
            j["standard_errors"] = se;
        }
        j["report"] = lhv::io::report_json(lhv::analysis::deviation_report(res.curve));
        emit(j.dump(2) + "\n", g.out);
    } else {
        emit(lhv::io::curve_csv(res.curve), g.out);
        if (!g.out.empty()) emit(lhv::io::manifest_json(man).dump(2) + "\n", g.out + ".manifest.json");
    }
    if (!g.plot.empty()) {
        std::string title = cfg.density.name() + " / " + lhv::to_string(cfg.mode) + " / " + lhv::io::to_string(m);
        emit(lhv::io::curve_svg(res.curve, title), g.plot);
    }
    return kOk;
}

int cmd_bell(const Globals& g, const std::string& angles, bool scan, const std::string& step_text, int top) {
    auto cfg = make_config(g);
    auto m = resolve_method(g, cfg);
    json j;
    j["manifest"] = lhv::io::manifest_json(manifest(cfg, m, "bell"));
    if (scan) {
        if (m == Method::Mc) throw UsageError("--scan supports closed, quad and dft");
        Angle step(parse_angle(step_text, g));
        std::vector<lhv::analysis::BellTriple> triples;
        try {
            triples = lhv::analysis::bell_scan(expectation_fn(cfg, m), step);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        j["step_deg"] = step.degrees();
        j["triples"] = triples.size();
        j["violations"] = lhv::analysis::count_violations(triples);
        auto arr = json::array();
        for (std::size_t i = 0; i < triples.size() && i < static_cast<std::size_t>(top); ++i)
            arr.push_back(lhv::io::triple_json(triples[i]));
        j["top"] = arr;
    } else {
        if (angles.empty()) throw UsageError("bell needs --angles a,b,c or --scan");
        auto abc = parse_angles(angles, g);
        j["angles_deg"] = {abc[0].degrees(), abc[1].degrees(), abc[2].degrees()};
        if (m == Method::Mc) {
            auto t = lhv::mc::bell_trial(cfg.density, abc[0], abc[1], abc[2], cfg.pairs_per_angle, cfg.mode, cfg.seed);
            j["lhs"] = t.lhs;
            j["rhs"] = t.rhs;
            j["violated"] = t.lhs - t.rhs > lhv::analysis::kBellTolerance;
            j["lhs_se"] = t.lhs_se;
            j["rhs_se"] = t.rhs_se;
        } else {
            auto t = lhv::analysis::bell_evaluate(expectation_fn(cfg, m), abc[0], abc[1], abc[2]);
            j["lhs"] = t.lhs;
            j["rhs"] = t.rhs;
            j["violated"] = t.violated;
        }
    }
    emit(j.dump(2) + "\n", g.out);
    return kOk;
}

int cmd_verify(const Globals& g) {
    auto cfg = make_config(g);
    lhv::verify::Options opt;
    opt.mc_pairs = cfg.pairs_per_angle;
    opt.seed = cfg.seed;
    auto res = lhv::verify::run(cfg.density, cfg.mode, opt);
    json j;
    j["manifest"] = lhv::io::manifest_json(manifest(cfg, Method::Quad, "verify"));
    j["paths"] = res.paths;
    if (res.single_path) j["note"] = "single path";
    auto arr = json::array();
    for (const auto& c : res.comparisons)
        arr.push_back({{"pair", c.first + "/" + c.second}, {"max_rel_c", c.max_c}, {"max_rel_t", c.max_t},
                       {"max_rel_e", c.max_e}, {"tolerance", c.tolerance}, {"ok", c.ok}});
    j["comparisons"] = arr;
    if (res.mc)
        j["mc"] = {{"max_z_e", res.mc->max_z_e}, {"max_z_t", res.mc->max_z_t}, {"max_abs_dev_e", res.mc->max_abs_dev_e},
                   {"sigma_limit", res.mc->sigma_limit}, {"ok", res.mc->ok}};
    j["ok"] = res.ok();
    emit(j.dump(2) + "\n", g.out);
    return res.ok() ? kOk : kVerifyFailed;
}

int cmd_stats(const Globals& g) {
    auto cfg = make_config(g);
    auto m = resolve_method(g, cfg);
    auto rep = lhv::analysis::deviation_report(compute_curve(cfg, m).curve);
    if (g.format == "csv") {
        auto r = lhv::io::report_json(rep);
        std::string text = "key,value\n";
        for (auto it = r.begin(); it != r.end(); ++it) text += it.key() + "," + lhv::io::fmt_num(it.value().get<double>()) + "\n";
        emit(text, g.out);
    } else {
        json j;
        j["manifest"] = lhv::io::manifest_json(manifest(cfg, m, "stats"));
        j["report"] = lhv::io::report_json(rep);
        emit(j.dump(2) + "\n", g.out);
    }
    return kOk;
}

std::vector<double> parse_exponents(const std::string& spec) {
    auto num = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError("malformed exponent '" + s + "'");
        }
        if (used != s.size() || !(v > 0)) throw UsageError("exponents must be positive numbers");
        return v;
    };
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw UsageError("--exponents range is lo:hi:step");
        double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
        if (hi < lo) throw UsageError("--exponents range needs lo <= hi");
        long n = std::lround(std::floor((hi - lo) / step + 1e-9));
        for (long k = 0; k <= n; ++k) out.push_back(lo + step * k);
        // the Theory II exponent is always reported when it lies in range
        if (lhv::kInvE >= lo && lhv::kInvE <= hi) {
            out.push_back(lhv::kInvE);
            std::sort(out.begin(), out.end());
        }
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(num(item));
    }
    if (out.empty()) throw UsageError("no exponents given");
    return out;
}

int cmd_tradeoff(const Globals& g, const std::string& exponents) {
    auto cfg = make_config(g);
    auto rows = lhv::analysis::tradeoff_scan(parse_exponents(exponents), cfg);
    if (g.format == "json") {
        json j;
        j["manifest"] = lhv::io::manifest_json(manifest(cfg, Method::Quad, "tradeoff"));
        auto arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"exponent", r.exponent}, {"max_abs_dev_e", r.max_abs_dev_e}, {"max_rel_dev_t", r.max_rel_dev_t},
                           {"std_abs_dev_e", r.std_abs_dev_e}, {"std_rel_dev_t", r.std_rel_dev_t}});
        j["rows"] = arr;
        emit(j.dump(2) + "\n", g.out);
    } else {
        using lhv::io::fmt_num;
        std::string text = "exponent,max_abs_dev_e,max_rel_dev_t,std_abs_dev_e,std_rel_dev_t\n";
        for (const auto& r : rows)
            text += fmt_num(r.exponent) + "," + fmt_num(r.max_abs_dev_e) + "," + fmt_num(r.max_rel_dev_t) + "," +
                    fmt_num(r.std_abs_dev_e) + "," + fmt_num(r.std_rel_dev_t) + "\n";
        emit(text, g.out);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic-detection hidden-variable models for correlated pairs"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--theory", g.theory, "Detection density")->check(CLI::IsMember({"naive", "proj", "pow", "custom"}));
    app.add_option("--exponent", g.exponent, "Exponent p of cos^{|p|} (custom, or override for pow)")
        ->check(CLI::PositiveNumber);
    app.add_option("--mode", g.mode, "Source correlation")->check(CLI::IsMember({"corr", "anticorr"}));
    app.add_option("--method", g.method, "Computation path")
        ->check(CLI::IsMember({"auto", "closed", "quad", "dft", "mc"}));
    app.add_option("--theta-points", g.theta_points, "Quadrature nodes")->check(CLI::Range(2, 100'000'000));
    app.add_option("--phi-points", g.phi_points, "Separation samples on [0, pi]")->check(CLI::Range(2, 10'000'000));
    app.add_option("--grid", g.grid, "paper: 50-point half interval doubled; full: whole period")
        ->check(CLI::IsMember({"paper", "full"}));
    app.add_option("--pairs", g.pairs, "Monte Carlo pairs per angle")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
    app.add_option("--seed", g.seed, "Monte Carlo master seed");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_option("--plot", g.plot, "SVG figure path");
    auto* deg = app.add_flag("--degrees", g.degrees, "Angle options are degrees (default)");
    app.add_flag("--radians", g.radians, "Angle options are radians")->excludes(deg);

    auto* sweep = app.add_subcommand("sweep", "Correlation and pair-rate curve over [0, pi]");
    auto* bell = app.add_subcommand("bell", "Bell inequality evaluation or scan");
    std::string angles, step = "2";
    bool scan = false;
    int top = 10;
    bell->add_option("--angles", angles, "Analyzer angles a,b,c");
    bell->add_flag("--scan", scan, "Exhaustive search over a grid of triples");
    bell->add_option("--step", step, "Scan grid step");
    bell->add_option("--top", top, "Triples listed in a scan")->check(CLI::NonNegativeNumber);
    auto* verify = app.add_subcommand("verify", "Cross-check closed form, quadrature, DFT and Monte Carlo");
    auto* stats = app.add_subcommand("stats", "Deviation statistics of a curve");
    auto* tradeoff = app.add_subcommand("tradeoff", "Error channels across cos^{|p|} exponents");
    std::string exponents = "0.2:1.0:0.05";
    tradeoff->add_option("--exponents", exponents, "lo:hi:step or comma list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*sweep) return cmd_sweep(g);
        if (*bell) return cmd_bell(g, angles, scan, step, top);
        if (*verify) return cmd_verify(g);
        if (*stats) return cmd_stats(g);
        if (*tradeoff) return cmd_tradeoff(g, exponents);
    } catch (const lhv::DegenerateRateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const lhv::ZeroCoincidenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kZeroCoincidence;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::logic_error& e) {
        // domain, range, invalid-argument and not-even errors
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
