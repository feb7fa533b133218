#pragma once

// Domain types shared by every computation path: angles, detection densities,
// correlation modes, run configuration and curve samples.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lhv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInvE = 1.0 / std::numbers::e;

// Error kinds. The CLI maps each one onto its own exit code.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct DegenerateRateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroCoincidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotEvenError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoClosedFormError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Angle in radians. Degrees only enter through from_degrees().
struct Angle {
    double radians = 0.0;

    constexpr Angle() = default;
    constexpr explicit Angle(double rad) : radians(rad) {}

    static constexpr Angle from_degrees(double deg) { return Angle(deg * kPi / 180.0); }
    constexpr double degrees() const { return radians * 180.0 / kPi; }

    constexpr Angle operator-() const { return Angle(-radians); }
    friend constexpr Angle operator+(Angle a, Angle b) { return Angle(a.radians + b.radians); }
    friend constexpr Angle operator-(Angle a, Angle b) { return Angle(a.radians - b.radians); }
    friend constexpr bool operator==(Angle, Angle) = default;
};

/// Maps any angle onto [0, pi] using E(-x) = E(x) and 2pi periodicity.
inline Angle fold_to_half_period(Angle a) {
    double r = std::fmod(std::abs(a.radians), kTwoPi);
    if (r > kPi) r = kTwoPi - r;
    return Angle(r);
}

/// Odd extension of a^b to negative bases: a^b for a >= 0, -((-a)^b) otherwise.
inline double signed_pow(double a, double b) {
    if (!(std::abs(a) <= 1.0)) throw DomainError("signed_pow: |a| must be <= 1");
    if (!(b > 0.0)) throw DomainError("signed_pow: exponent must be positive");
    if (b == 1.0) return a;
    return a >= 0.0 ? std::pow(a, b) : -std::pow(-a, b);
}

enum class DensityFamily { NaiveSG, Projection, SignedPowerCosine, Custom };

inline const char* to_string(DensityFamily f) {
    switch (f) {
        case DensityFamily::NaiveSG: return "naive";
        case DensityFamily::Projection: return "proj";
        case DensityFamily::SignedPowerCosine: return "pow";
        case DensityFamily::Custom: return "custom";
    }
    return "?";
}

/// Detection density f(lambda'). |f| is the detection probability at local
/// hidden angle lambda', sign(f) the registered spin. Immutable; copies share
/// any user-supplied evaluator.
class DetectionDensity {
public:
    using Evaluator = std::function<double(double)>;

    /// Deterministic toy theory: sign(cos), detection always certain.
    static DetectionDensity naive() { return DetectionDensity(DensityFamily::NaiveSG, std::nullopt); }
    /// Theory I: f = cos.
    static DetectionDensity projection() { return DetectionDensity(DensityFamily::Projection, std::nullopt); }
    /// Theory II: f = signed_pow(cos, p), p = 1/e unless overridden.
    static DetectionDensity signed_power_cosine(double exponent = kInvE) {
        check_exponent(exponent);
        return DetectionDensity(DensityFamily::SignedPowerCosine, exponent);
    }
    /// User exponent on the same cos^{|p|} family.
    static DetectionDensity custom_power(double exponent) {
        check_exponent(exponent);
        return DetectionDensity(DensityFamily::Custom, exponent);
    }
    /// Arbitrary periodic function of lambda'. Values with |f| > 1 are
    /// rejected at evaluation time.
    static DetectionDensity custom(Evaluator fn, std::string label = "custom") {
        if (!fn) throw std::invalid_argument("custom density needs an evaluator");
        DetectionDensity d(DensityFamily::Custom, std::nullopt);
        d.fn_ = std::make_shared<const Evaluator>(std::move(fn));
        d.label_ = std::move(label);
        return d;
    }

    DensityFamily family() const { return family_; }
    std::optional<double> exponent() const { return exponent_; }
    bool has_closed_form() const {
        return family_ == DensityFamily::NaiveSG || family_ == DensityFamily::Projection;
    }
    /// Short name used in reports and manifests.
    std::string name() const {
        if (fn_) return label_;
        return to_string(family_);
    }

    double operator()(double lambda) const {
        switch (family_) {
            case DensityFamily::NaiveSG: return std::cos(lambda) >= 0.0 ? 1.0 : -1.0;
            case DensityFamily::Projection: return std::cos(lambda);
            case DensityFamily::SignedPowerCosine: return signed_pow(std::cos(lambda), *exponent_);
            case DensityFamily::Custom: break;
        }
        if (!fn_) return signed_pow(std::cos(lambda), *exponent_);
        double v = (*fn_)(lambda);
        if (!(std::abs(v) <= 1.0)) throw DomainError("custom density returned |f| > 1");
        return v;
    }
    double operator()(Angle lambda) const { return (*this)(lambda.radians); }

private:
    DetectionDensity(DensityFamily family, std::optional<double> exponent)
        : family_(family), exponent_(exponent) {}

    static void check_exponent(double p) {
        if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("density exponent must be positive");
    }

    DensityFamily family_;
    std::optional<double> exponent_;
    std::shared_ptr<const Evaluator> fn_;
    std::string label_;
};

inline double eval_density(const DetectionDensity& d, Angle lambda) { return d(lambda); }

enum class CorrelationMode { Correlated, Anticorrelated };

inline const char* to_string(CorrelationMode m) {
    return m == CorrelationMode::Correlated ? "corr" : "anticorr";
}

/// Spin-sign factor of the second detector: the anticorrelated source flips it.
constexpr double mode_sign(CorrelationMode m) {
    return m == CorrelationMode::Anticorrelated ? -1.0 : 1.0;
}

/// Quantum prediction: -cos(phi) for anticorrelated spins, +cos(phi) for
/// correlated photons (phi already doubled).
inline double qm_expectation(Angle phi, CorrelationMode m) {
    return mode_sign(m) * std::cos(phi.radians);
}

enum class GridMode { PaperHalfInterval, FullPeriod };

inline const char* to_string(GridMode g) {
    return g == GridMode::PaperHalfInterval ? "paper" : "full";
}

struct TheoryConfig {
    DetectionDensity density = DetectionDensity::projection();
    CorrelationMode mode = CorrelationMode::Anticorrelated;
    int theta_points = 50;
    int phi_points = 50;
    GridMode grid = GridMode::FullPeriod;
    std::uint64_t seed = 42;
    std::int64_t pairs_per_angle = 1'000'000;

    void validate() const {
        if (theta_points < 2) throw std::invalid_argument("theta_points must be >= 2");
        if (phi_points < 2) throw std::invalid_argument("phi_points must be >= 2");
        if (pairs_per_angle < 1) throw std::invalid_argument("pairs_per_angle must be >= 1");
    }
};

/// One sample of a correlation curve. c carries the correlation-mode sign,
/// so e_hv == c / t.
struct CurvePoint {
    Angle phi;
    double c = 0.0;
    double t = 0.0;
    double e_hv = 0.0;
    double e_ref = 0.0;
};

using Curve = std::vector<CurvePoint>;

/// Separation angles of a sweep over [0, pi].
///
/// FullPeriod: inclusive linspace, both 0 and pi present.
/// PaperHalfInterval: k*pi/points for k < points, i.e. the same nodes as a
/// half-interval theta grid of equal size.
inline std::vector<Angle> phi_grid(int points, GridMode mode) {
    if (points < 2) throw std::invalid_argument("phi grid needs >= 2 points");
    std::vector<Angle> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        if (mode == GridMode::FullPeriod)
            out.emplace_back(k == points - 1 ? kPi : kPi * k / (points - 1));
        else
            out.emplace_back(kPi * k / points);
    }
    return out;
}

}  // namespace lhv
