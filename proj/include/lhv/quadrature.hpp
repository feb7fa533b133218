#pragma once

// Rectangular-rule evaluation of the correlation integral c(phi), the pair
// rate t(phi) and their normalized ratio for any detection density.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lhv/core.hpp"

namespace lhv::quad {

/// Left-endpoint nodes on a half-open interval.
///
/// FullPeriod covers [0, 2pi). PaperHalfInterval covers [0, pi) and counts
/// every node twice; that is exact whenever f(th) f(th - phi) has period pi,
/// which holds for all the cosine-based built-in densities.
struct QuadratureGrid {
    GridMode mode = GridMode::FullPeriod;
    int theta_points = 0;
    std::vector<double> nodes;
    double weight = 0.0;
    double multiplicity = 1.0;

    static QuadratureGrid make(GridMode mode, int theta_points) {
        if (theta_points < 2) throw std::invalid_argument("quadrature grid needs >= 2 points");
        QuadratureGrid g;
        g.mode = mode;
        g.theta_points = theta_points;
        double span = mode == GridMode::FullPeriod ? kTwoPi : kPi;
        g.weight = span / theta_points;
        g.multiplicity = mode == GridMode::FullPeriod ? 1.0 : 2.0;
        g.nodes.reserve(static_cast<std::size_t>(theta_points));
        for (int k = 0; k < theta_points; ++k) g.nodes.push_back(span * k / theta_points);
        return g;
    }

    double scale() const { return weight * multiplicity; }
};

/// Integral of f(th) f(th - phi) over one period, no mode sign applied.
inline double quad_c(const DetectionDensity& d, Angle phi, const QuadratureGrid& g) {
    double sum = 0.0;
    for (double th : g.nodes) sum += d(th) * d(th - phi.radians);
    return sum * g.scale();
}

/// Integral of |f(th) f(th - phi)| over one period.
inline double quad_t(const DetectionDensity& d, Angle phi, const QuadratureGrid& g) {
    double sum = 0.0;
    for (double th : g.nodes) sum += std::abs(d(th) * d(th - phi.radians));
    return sum * g.scale();
}

// Below this the pair rate cannot normalize anything.
inline constexpr double kDegenerateRate = 1e-12;

inline CurvePoint quad_expectation(const DetectionDensity& d, Angle phi, CorrelationMode mode,
                                   const QuadratureGrid& g) {
    // One pass so that t >= |c| holds bit-for-bit.
    double sc = 0.0;
    double st = 0.0;
    for (double th : g.nodes) {
        double prod = d(th) * d(th - phi.radians);
        sc += prod;
        st += std::abs(prod);
    }
    CurvePoint pt;
    pt.phi = phi;
    pt.t = st * g.scale();
    if (!(pt.t > kDegenerateRate))
        throw DegenerateRateError("pair rate t(phi) vanishes; E cannot be normalized");
    pt.c = mode_sign(mode) * sc * g.scale();
    pt.e_hv = pt.c / pt.t;
    pt.e_ref = qm_expectation(phi, mode);
    return pt;
}

/// Quadrature sweep over cfg's phi grid.
inline Curve sweep_curve(const TheoryConfig& cfg) {
    cfg.validate();
    auto grid = QuadratureGrid::make(cfg.grid, cfg.theta_points);
    Curve out;
    for (Angle phi : phi_grid(cfg.phi_points, cfg.grid)) out.push_back(quad_expectation(cfg.density, phi, cfg.mode, grid));
    return out;
}

}  // namespace lhv::quad
