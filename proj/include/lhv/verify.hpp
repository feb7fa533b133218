#pragma once

// Cross-check of the independent computation paths for one theory.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lhv/closed_form.hpp"
#include "lhv/core.hpp"
#include "lhv/montecarlo.hpp"
#include "lhv/quadrature.hpp"
#include "lhv/spectral.hpp"

namespace lhv::verify {

struct Options {
    std::size_t nodes = 256;           // shared node count for quad and dft
    int reference_points = 10'000;     // quadrature grid used as the MC reference
    int mc_points = 5;                 // separations sampled by Monte Carlo
    std::int64_t mc_pairs = 1'000'000;
    std::uint64_t seed = 42;
    double numeric_tol = 1e-6;         // quad vs dft, relative
    double closed_tol = 1e-3;          // closed vs a discretized path
    double mc_sigma = 4.0;             // standard errors
};

/// Largest disagreement between two paths over a shared node set.
struct PathComparison {
    std::string first;
    std::string second;
    double max_c = 0.0;
    double max_t = 0.0;
    double max_e = 0.0;
    double tolerance = 0.0;
    bool ok = true;
};

struct McComparison {
    double max_z_e = 0.0;
    double max_z_t = 0.0;
    double max_abs_dev_e = 0.0;
    double sigma_limit = 0.0;
    bool ok = true;
};

struct Result {
    std::vector<std::string> paths;
    std::vector<PathComparison> comparisons;
    std::optional<McComparison> mc;
    bool single_path = false;

    bool ok() const {
        bool good = std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.ok; });
        return good && (!mc || mc->ok);
    }
};

/// |x - y| scaled by max(|x|, |y|, 1).
inline double rel_diff(double x, double y) {
    return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1.0});
}

inline PathComparison compare(const std::string& a, const Curve& ca, const std::string& b, const Curve& cb,
                              double tol) {
    PathComparison r{a, b, 0, 0, 0, tol, true};
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
        r.max_c = std::max(r.max_c, rel_diff(ca[i].c, cb[i].c));
        r.max_t = std::max(r.max_t, rel_diff(ca[i].t, cb[i].t));
        r.max_e = std::max(r.max_e, rel_diff(ca[i].e_hv, cb[i].e_hv));
    }
    r.ok = r.max_c <= tol && r.max_t <= tol && r.max_e <= tol;
    return r;
}

/// Runs every path available for the density. The toy theory has only its
/// closed form; f = cos has all four; other densities skip the closed form.
inline Result run(const DetectionDensity& d, CorrelationMode mode, const Options& opt = {}) {
    Result res;
    if (d.family() == DensityFamily::NaiveSG) {
        res.paths = {"closed"};
        res.single_path = true;
        return res;
    }

    const std::size_t n = opt.nodes;
    auto dft_curve = spectral::spectral_curve(d, n, mode);
    auto grid = quad::QuadratureGrid::make(GridMode::FullPeriod, static_cast<int>(n));
    Curve quad_curve;
    for (const auto& p : dft_curve) quad_curve.push_back(quad::quad_expectation(d, p.phi, mode, grid));

    if (d.has_closed_form()) {
        Curve closed_curve;
        for (const auto& p : dft_curve) closed_curve.push_back(closed::closed_point(d, p.phi, mode));
        res.paths.push_back("closed");
        res.comparisons.push_back(compare("closed", closed_curve, "quad", quad_curve, opt.closed_tol));
        res.comparisons.push_back(compare("closed", closed_curve, "dft", dft_curve, opt.closed_tol));
    }
    res.paths.insert(res.paths.end(), {"quad", "dft", "mc"});
    res.comparisons.push_back(compare("quad", quad_curve, "dft", dft_curve, opt.numeric_tol));

    McComparison mc;
    mc.sigma_limit = opt.mc_sigma;
    auto ref_grid = quad::QuadratureGrid::make(GridMode::FullPeriod, opt.reference_points);
    for (int k = 0; k < opt.mc_points; ++k) {
        Angle phi(kPi * (k + 0.5) / opt.mc_points);
        auto ref = quad::quad_expectation(d, phi, mode, ref_grid);
        auto est = mc::estimate_point(
            mc::simulate_batch(d, phi, opt.mc_pairs, mode, mc::stream_seed(opt.seed, static_cast<std::uint64_t>(k))),
            mode);
        double de = std::abs(est.point.e_hv - ref.e_hv);
        mc.max_abs_dev_e = std::max(mc.max_abs_dev_e, de);
        if (est.se_e > 0) mc.max_z_e = std::max(mc.max_z_e, de / est.se_e);
        if (est.se_t > 0) mc.max_z_t = std::max(mc.max_z_t, std::abs(est.point.t - ref.t) / est.se_t);
    }
    mc.ok = mc.max_z_e <= mc.sigma_limit && mc.max_z_t <= mc.sigma_limit;
    res.mc = mc;
    return res;
}

}  // namespace lhv::verify
