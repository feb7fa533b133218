#pragma once

// Output formats: curve CSV, JSON reports with provenance, SVG figures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhv/analysis.hpp"
#include "lhv/core.hpp"

namespace lhv::io {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kCsvHeader = "phi_rad,c,t,e_hv,e_ref,diff_e,rel_dev_t";

/// printf "%.12g".
inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Curve as CSV: header line plus one LF-terminated row per point.
/// rel_dev_t is relative to the curve's rate center.
inline void write_curve_csv(std::ostream& os, const Curve& curve) {
    os << kCsvHeader << '\n';
    if (curve.empty()) return;
    const double center = analysis::rate_center(curve);
    for (const auto& p : curve) {
        os << fmt_num(p.phi.radians) << ',' << fmt_num(p.c) << ',' << fmt_num(p.t) << ',' << fmt_num(p.e_hv) << ','
           << fmt_num(p.e_ref) << ',' << fmt_num(p.e_hv - p.e_ref) << ','
           << fmt_num(center > 0.0 ? (p.t - center) / center : 0.0) << '\n';
    }
}

inline std::string curve_csv(const Curve& curve) {
    std::ostringstream os;
    write_curve_csv(os, curve);
    return os.str();
}

enum class Method { Closed, Quad, Dft, Mc };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Closed: return "closed";
        case Method::Quad: return "quad";
        case Method::Dft: return "dft";
        case Method::Mc: return "mc";
    }
    return "?";
}

/// Provenance attached to every output. The timestamp lives only here, never
/// in the CSV, so equal manifests give byte-identical CSV.
struct RunManifest {
    TheoryConfig config;
    Method method = Method::Quad;
    std::string command;
    std::string timestamp;
};

inline std::string utc_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::ordered_json config_json(const TheoryConfig& c) {
    nlohmann::ordered_json j;
    j["theory"] = c.density.name();
    if (auto p = c.density.exponent()) j["exponent"] = *p;
    j["mode"] = to_string(c.mode);
    j["grid"] = to_string(c.grid);
    j["theta_points"] = c.theta_points;
    j["phi_points"] = c.phi_points;
    j["pairs_per_angle"] = c.pairs_per_angle;
    j["seed"] = c.seed;
    return j;
}

inline nlohmann::ordered_json manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool"] = "lhvlab";
    j["version"] = kToolVersion;
    j["command"] = m.command;
    j["method"] = to_string(m.method);
    j["config"] = config_json(m.config);
    j["seed"] = m.config.seed;
    j["timestamp"] = m.timestamp;
    return j;
}

inline nlohmann::ordered_json report_json(const analysis::DeviationReport& r) {
    nlohmann::ordered_json j;
    j["mean_half_t"] = r.mean_half_t;
    j["sample_mean_half_t"] = r.sample_mean_half_t;
    j["max_rel_dev_t"] = r.max_rel_dev_t;
    j["std_rel_dev_t"] = r.std_rel_dev_t;
    j["max_abs_dev_e"] = r.max_abs_dev_e;
    j["std_abs_dev_e"] = r.std_abs_dev_e;
    j["sample_points"] = r.sample_points;
    return j;
}

inline nlohmann::ordered_json triple_json(const analysis::BellTriple& t) {
    nlohmann::ordered_json j;
    j["a_deg"] = t.a.degrees();
    j["b_deg"] = t.b.degrees();
    j["c_deg"] = t.c.degrees();
    j["lhs"] = t.lhs;
    j["rhs"] = t.rhs;
    j["violated"] = t.violated;
    return j;
}

inline nlohmann::ordered_json curve_json(const Curve& curve) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : curve)
        arr.push_back({{"phi_rad", p.phi.radians}, {"c", p.c}, {"t", p.t}, {"e_hv", p.e_hv}, {"e_ref", p.e_ref}});
    return arr;
}

/// Static figure: E, t/2 and the reference curve against phi on [0, pi].
class SvgPlot {
public:
    struct Series {
        std::string label;
        std::string color;
        std::vector<double> x;
        std::vector<double> y;
        bool dashed = false;
    };

    explicit SvgPlot(std::string title) : title_(std::move(title)) {}

    void add(Series s) { series_.push_back(std::move(s)); }

    std::string render() const {
        constexpr double W = 640, H = 420, L = 60, R = 170, T = 40, B = 50;
        double xmin = 0, xmax = kPi, ymin = -1, ymax = 1;
        for (const auto& s : series_)
            for (double y : s.y) {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        ymin = std::floor(ymin * 2) / 2;
        ymax = std::ceil(ymax * 2) / 2;
        auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
        auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title_ << "</text>\n";
        // axes
        os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(ymin)
           << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(xmin) << "\" y2=\"" << py(ymax)
           << "\" stroke=\"black\"/>\n";
        if (ymin < 0 && ymax > 0)
            os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(0) << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(0)
               << "\" stroke=\"#bbb\"/>\n";
        const char* xt[] = {"0", "&#960;/4", "&#960;/2", "3&#960;/4", "&#960;"};
        for (int i = 0; i <= 4; ++i) {
            double x = kPi * i / 4;
            os << "<text x=\"" << px(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
               << xt[i] << "</text>\n";
        }
        for (double y = ymin; y <= ymax + 1e-9; y += 0.5)
            os << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
               << fmt_num(y) << "</text>\n";
        os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
           << "\" text-anchor=\"middle\" font-size=\"12\">&#966; (rad)</text>\n";

        double ly = T + 10;
        for (const auto& s : series_) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (s.dashed) os << " stroke-dasharray=\"5,3\"";
            os << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << px(s.x[i]) << ',' << py(s.y[i]);
            os << "\"/>\n";
            os << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
               << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "")
               << "/>\n";
            os << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << s.label << "</text>\n";
            ly += 20;
        }
        os << "</svg>\n";
        return os.str();
    }

private:
    std::string title_;
    std::vector<Series> series_;
};

/// E_hv, t/2 and E_ref of a curve in one figure.
inline std::string curve_svg(const Curve& curve, const std::string& title) {
    SvgPlot plot(title);
    SvgPlot::Series e{"E (hidden var.)", "#1f77b4", {}, {}, false};
    SvgPlot::Series t{"t/2", "#2ca02c", {}, {}, false};
    SvgPlot::Series q{"E (QM)", "#d62728", {}, {}, true};
    for (const auto& p : curve) {
        e.x.push_back(p.phi.radians);
        e.y.push_back(p.e_hv);
        t.x.push_back(p.phi.radians);
        t.y.push_back(0.5 * p.t);
        q.x.push_back(p.phi.radians);
        q.y.push_back(p.e_ref);
    }
    plot.add(std::move(e));
    plot.add(std::move(t));
    plot.add(std::move(q));
    return plot.render();
}

}  // namespace lhv::io
