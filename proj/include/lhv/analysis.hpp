#pragma once

// Deviation statistics of a curve against the quantum prediction, Bell
// inequality evaluation and search, and the exponent tradeoff scan.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lhv/core.hpp"
#include "lhv/quadrature.hpp"

namespace lhv::analysis {

/// Two error channels of a curve.
///
/// The pair-rate channel is measured on t/2 relative to its center, the
/// midpoint of its range. That center is the quoted "mean" for both theories
/// (pi/4 + 1/2 for f = cos). The correlation channel is the absolute
/// difference E - E_ref. Standard deviations divide by N.
struct DeviationReport {
    double mean_half_t = 0.0;         // (max + min) / 2 of t/2
    double sample_mean_half_t = 0.0;  // arithmetic mean of t/2
    double max_rel_dev_t = 0.0;
    double std_rel_dev_t = 0.0;
    double max_abs_dev_e = 0.0;
    double std_abs_dev_e = 0.0;
    int sample_points = 0;
};

namespace detail {
// Population mean and std, accumulated about a shift so that a constant
// series gives exactly zero.
struct Moments {
    double mean;
    double std;
};
inline Moments moments(const std::vector<double>& v, double shift) {
    double s = 0.0;
    for (double x : v) s += x - shift;
    const double n = static_cast<double>(v.size());
    const double off = s / n;
    double ss = 0.0;
    for (double x : v) {
        double d = (x - shift) - off;
        ss += d * d;
    }
    return {shift + off, std::sqrt(ss / n)};
}
inline double midrange(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return 0.5 * (*lo + *hi);
}
}  // namespace detail

/// Center of t over a curve, the reference for relative t deviations.
inline double rate_center(const Curve& curve) {
    if (curve.empty()) throw std::invalid_argument("rate_center: empty curve");
    std::vector<double> t;
    for (const auto& p : curve) t.push_back(p.t);
    return detail::midrange(t);
}

inline DeviationReport deviation_report(const Curve& curve) {
    if (curve.empty()) throw std::invalid_argument("deviation_report: empty curve");
    std::vector<double> half_t;
    std::vector<double> de;
    for (const auto& p : curve) {
        half_t.push_back(0.5 * p.t);
        de.push_back(p.e_hv - p.e_ref);
    }
    DeviationReport r;
    r.sample_points = static_cast<int>(curve.size());
    const double center = detail::midrange(half_t);
    r.mean_half_t = center;
    const auto mt = detail::moments(half_t, center);
    r.sample_mean_half_t = mt.mean;
    if (center > 0.0) {
        double mx = 0.0;
        for (double x : half_t) mx = std::max(mx, std::abs(x - center));
        r.max_rel_dev_t = mx / center;
        r.std_rel_dev_t = mt.std / center;
    }
    for (double d : de) r.max_abs_dev_e = std::max(r.max_abs_dev_e, std::abs(d));
    r.std_abs_dev_e = detail::moments(de, detail::midrange(de)).std;
    return r;
}

/// Correlation as a function of analyzer separation.
using ExpectationFn = std::function<double(Angle)>;

// Violation margin. Exact equalities (the toy theory has several on grid
// points) must not count as violations through rounding.
inline constexpr double kBellTolerance = 1e-12;

struct BellTriple {
    Angle a, b, c;
    double lhs = 0.0;
    double rhs = 0.0;
    bool violated = false;

    double margin() const { return lhs - rhs; }
};

inline BellTriple make_triple(Angle a, Angle b, Angle c, double e_ab, double e_ac, double e_bc) {
    BellTriple t{a, b, c, std::abs(e_ab - e_ac), 1.0 + e_bc, false};
    t.violated = t.lhs - t.rhs > kBellTolerance;
    return t;
}

/// |E(b-a) - E(c-a)| against 1 + E(c-b).
inline BellTriple bell_evaluate(const ExpectationFn& e, Angle a, Angle b, Angle c) {
    return make_triple(a, b, c, e(b - a), e(c - a), e(c - b));
}

/// Exhaustive search over ordered triples of distinct angles k*step in
/// [0, pi). E is sampled once per separation. Sorted by lhs - rhs,
/// largest first; max_results = 0 keeps everything.
inline std::vector<BellTriple> bell_scan(const ExpectationFn& e, Angle step, std::size_t max_results = 0) {
    if (!(step.radians > 0.0)) throw std::invalid_argument("bell_scan: step must be positive");
    const double ratio = kPi / step.radians;
    const long m = std::lround(ratio);
    if (m < 3 || std::abs(ratio - static_cast<double>(m)) > 1e-9)
        throw std::invalid_argument("bell_scan: step must divide pi into at least 3 parts");
    const double h = kPi / static_cast<double>(m);
    // E at separations (j - i) * h for j - i in [-(m-1), m-1]
    std::vector<double> table(static_cast<std::size_t>(2 * m - 1));
    for (long k = -(m - 1); k <= m - 1; ++k) table[static_cast<std::size_t>(k + m - 1)] = e(Angle(h * k));
    auto at = [&](long i, long j) { return table[static_cast<std::size_t>(j - i + m - 1)]; };

    std::vector<BellTriple> out;
    out.reserve(static_cast<std::size_t>(m * (m - 1) * (m - 2)));
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
            for (long k = 0; k < m; ++k) {
                if (i == j || i == k || j == k) continue;
                out.push_back(make_triple(Angle(h * i), Angle(h * j), Angle(h * k), at(i, j), at(i, k), at(j, k)));
            }
    auto by_margin = [](const BellTriple& x, const BellTriple& y) {
        if (x.margin() != y.margin()) return x.margin() > y.margin();
        if (x.a.radians != y.a.radians) return x.a.radians < y.a.radians;
        if (x.b.radians != y.b.radians) return x.b.radians < y.b.radians;
        return x.c.radians < y.c.radians;
    };
    if (max_results > 0 && max_results < out.size()) {
        std::partial_sort(out.begin(), out.begin() + static_cast<long>(max_results), out.end(), by_margin);
        out.resize(max_results);
    } else {
        std::sort(out.begin(), out.end(), by_margin);
    }
    return out;
}

inline std::size_t count_violations(const std::vector<BellTriple>& triples) {
    return static_cast<std::size_t>(
        std::count_if(triples.begin(), triples.end(), [](const BellTriple& t) { return t.violated; }));
}

/// E from a quadrature grid, valid at any separation.
inline ExpectationFn quadrature_expectation(DetectionDensity d, CorrelationMode mode, quad::QuadratureGrid g) {
    return [d = std::move(d), mode, g = std::move(g)](Angle phi) {
        return quad::quad_expectation(d, phi, mode, g).e_hv;
    };
}

struct TradeoffRow {
    double exponent = 0.0;
    double max_abs_dev_e = 0.0;
    double max_rel_dev_t = 0.0;
    double std_abs_dev_e = 0.0;
    double std_rel_dev_t = 0.0;
};

/// Both error channels for the cos^{|p|} family, one quadrature sweep per p
/// using cfg's grids and mode.
inline std::vector<TradeoffRow> tradeoff_scan(const std::vector<double>& exponents, const TheoryConfig& cfg) {
    std::vector<TradeoffRow> rows;
    for (double p : exponents) {
        if (!(p > 0.0)) throw std::invalid_argument("tradeoff_scan: exponents must be positive");
        TheoryConfig c = cfg;
        c.density = DetectionDensity::custom_power(p);
        auto rep = deviation_report(quad::sweep_curve(c));
        rows.push_back({p, rep.max_abs_dev_e, rep.max_rel_dev_t, rep.std_abs_dev_e, rep.std_rel_dev_t});
    }
    return rows;
}

}  // namespace lhv::analysis
