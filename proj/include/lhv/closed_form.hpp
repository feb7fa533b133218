#pragma once

// Analytic reference curves for the theories that admit them.

#include <cmath>
#include <string>

#include "lhv/core.hpp"

namespace lhv::closed {

namespace detail {
// Closed forms accept [0, pi]; a few ulps of slack absorb degree conversion.
inline double checked_half_period(Angle phi, const char* what) {
    constexpr double slack = 1e-12;
    double r = phi.radians;
    if (!(r >= -slack && r <= kPi + slack))
        throw RangeError(std::string(what) + ": phi must lie in [0, pi]");
    return r < 0.0 ? 0.0 : (r > kPi ? kPi : r);
}
inline int sign_of(double x) { return x >= 0.0 ? 1 : -1; }
}  // namespace detail

/// Toy Stern-Gerlach theory: E = (2/pi) phi - 1.
inline double naive_expectation(Angle phi) {
    double r = detail::checked_half_period(phi, "naive_expectation");
    return 2.0 * r / kPi - 1.0;
}

struct NaiveSigns {
    int a;
    int b;
    int ab;
};

/// Spin outcomes of the toy theory at hidden angle theta: A = sign cos(theta),
/// B = sign(-cos(theta - phi)), with sign(0) taken as +1.
inline NaiveSigns naive_sign_table(Angle theta, Angle phi) {
    if (!(theta.radians >= -kPi / 2 && theta.radians < 3 * kPi / 2))
        throw RangeError("naive_sign_table: theta must lie in [-pi/2, 3pi/2)");
    detail::checked_half_period(phi, "naive_sign_table");
    int a = detail::sign_of(std::cos(theta.radians));
    int b = detail::sign_of(-std::cos(theta.radians - phi.radians));
    return {a, b, a * b};
}

/// Theory I (f = cos) integrals over one half period and the full period.
struct TheoryICurves {
    double c_minus;  // anticorrelated-pair probability, half period
    double c_plus;   // correlated-pair probability, half period
    double t1;       // pair rate
    double c1;       // unnormalized correlation, anticorrelated source
    double e_hv1;    // c1 / t1
};

inline TheoryICurves theory1_curves(Angle phi) {
    double p = detail::checked_half_period(phi, "theory1_curves");
    double s = std::sin(p);
    double c = std::cos(p);
    TheoryICurves out{};
    out.c_minus = 0.5 * (s - p * c);
    out.c_plus = 0.5 * (s + (kPi - p) * c);
    out.t1 = 2.0 * s + (kPi - 2.0 * p) * c;
    out.c1 = -kPi * c;
    out.e_hv1 = out.c1 / out.t1;
    return out;
}

/// c1(phi) normalized by the aligned rate t_max = pi instead of t1(phi).
inline double theory1_unnormalized_expectation(Angle phi) {
    double p = detail::checked_half_period(phi, "theory1_unnormalized_expectation");
    return -kPi * std::cos(p) / kPi;
}

/// Curve sample from the analytic forms. Any phi is accepted and folded onto
/// [0, pi]. Only NaiveSG and Projection have closed forms.
inline CurvePoint closed_point(const DetectionDensity& d, Angle phi, CorrelationMode mode) {
    Angle folded = fold_to_half_period(phi);
    double sigma = mode_sign(mode);
    CurvePoint pt;
    pt.phi = phi;
    pt.e_ref = qm_expectation(phi, mode);
    switch (d.family()) {
        case DensityFamily::NaiveSG: {
            // raw integral of sign(cos th) sign(cos(th - phi)) is 2pi (1 - 2phi/pi)
            pt.t = kTwoPi;
            pt.c = sigma * kTwoPi * (1.0 - 2.0 * folded.radians / kPi);
            pt.e_hv = pt.c / pt.t;
            if (mode == CorrelationMode::Anticorrelated) pt.e_hv = naive_expectation(folded);
            return pt;
        }
        case DensityFamily::Projection: {
            auto curves = theory1_curves(folded);
            pt.t = curves.t1;
            pt.c = sigma * kPi * std::cos(folded.radians);
            pt.e_hv = pt.c / pt.t;
            return pt;
        }
        default:
            throw NoClosedFormError("no closed form for density '" + d.name() + "'");
    }
}

inline Curve closed_curve(const TheoryConfig& cfg) {
    cfg.validate();
    Curve out;
    for (Angle phi : phi_grid(cfg.phi_points, cfg.grid)) out.push_back(closed_point(cfg.density, phi, cfg.mode));
    return out;
}

}  // namespace lhv::closed
