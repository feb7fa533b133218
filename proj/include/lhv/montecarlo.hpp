#pragma once

// Event-level simulation: emit pairs with a uniform hidden angle, let each
// detector fire with probability |f| at its local angle, tally coincidences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lhv/core.hpp"

namespace lhv::mc {

/// splitmix64 finalizer; decorrelates neighbouring (seed, index) pairs.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` under master `seed`. Independent of evaluation
/// order, so parallel sweeps reproduce serial ones.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

struct EventBatch {
    Angle phi;
    std::int64_t pairs_emitted = 0;
    std::int64_t coincidences = 0;
    std::int64_t spin_product_sum = 0;
    std::int64_t singles_a = 0;
    std::int64_t singles_b = 0;
};

/// Simulates n_pairs emissions at separation phi. The second detector's spin
/// is multiplied by the mode sign. Deterministic in `seed`.
inline EventBatch simulate_batch(const DetectionDensity& d, Angle phi, std::int64_t n_pairs, CorrelationMode mode,
                                 std::uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("simulate_batch: n_pairs must be >= 1");
    const int sigma = mode == CorrelationMode::Anticorrelated ? -1 : 1;
    Rng rng(seed);
    EventBatch b;
    b.phi = phi;
    b.pairs_emitted = n_pairs;
    for (std::int64_t i = 0; i < n_pairs; ++i) {
        double theta = kTwoPi * rng.uniform();
        double fa = d(theta);
        double fb = d(theta - phi.radians);
        // independent local draws on each side
        bool hit_a = rng.uniform() < std::abs(fa);
        bool hit_b = rng.uniform() < std::abs(fb);
        b.singles_a += hit_a;
        b.singles_b += hit_b;
        if (hit_a && hit_b) {
            ++b.coincidences;
            int sa = fa > 0.0 ? 1 : -1;
            int sb = (fb > 0.0 ? 1 : -1) * sigma;
            b.spin_product_sum += sa * sb;
        }
    }
    return b;
}

/// Curve point estimated from one batch, with binomial standard errors.
struct Estimate {
    CurvePoint point;
    double se_e = 0.0;
    double se_t = 0.0;
    EventBatch batch;
};

inline Estimate estimate_point(const EventBatch& b, CorrelationMode mode) {
    if (b.coincidences == 0) throw ZeroCoincidenceError("no coincidences recorded at phi = " + std::to_string(b.phi.radians));
    const double n = static_cast<double>(b.pairs_emitted);
    const double k = static_cast<double>(b.coincidences);
    Estimate est;
    est.batch = b;
    est.point.phi = b.phi;
    est.point.e_hv = static_cast<double>(b.spin_product_sum) / k;
    const double frac = k / n;
    est.point.t = kTwoPi * frac;
    est.point.c = est.point.e_hv * est.point.t;
    est.point.e_ref = qm_expectation(b.phi, mode);
    // products are +-1, so Var = 1 - E^2 per coincidence
    est.se_e = std::sqrt(std::max(0.0, 1.0 - est.point.e_hv * est.point.e_hv) / k);
    est.se_t = kTwoPi * std::sqrt(frac * (1.0 - frac) / n);
    return est;
}

namespace detail {
// Runs job(i) for i < count across hardware threads. Each index writes only
// its own slot, so results do not depend on scheduling.
template <typename Job>
void parallel_for(std::size_t count, Job job) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) job(i);
        });
}
}  // namespace detail

/// Monte Carlo estimate over cfg's phi grid; point i uses substream i.
inline std::vector<Estimate> estimate_curve(const TheoryConfig& cfg) {
    cfg.validate();
    auto phis = phi_grid(cfg.phi_points, cfg.grid);
    std::vector<EventBatch> batches(phis.size());
    detail::parallel_for(phis.size(), [&](std::size_t i) {
        batches[i] = simulate_batch(cfg.density, phis[i], cfg.pairs_per_angle, cfg.mode, stream_seed(cfg.seed, i));
    });
    std::vector<Estimate> out;
    out.reserve(batches.size());
    for (const auto& b : batches) out.push_back(estimate_point(b, cfg.mode));
    return out;
}

inline Curve to_curve(const std::vector<Estimate>& est) {
    Curve out;
    out.reserve(est.size());
    for (const auto& e : est) out.push_back(e.point);
    return out;
}

struct BellTrial {
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    double e_ab = 0.0;
    double e_ac = 0.0;
    double e_bc = 0.0;
};

/// |E(a,b) - E(a,c)| and 1 + E(b,c) from three independent runs.
inline BellTrial bell_trial(const DetectionDensity& d, Angle a, Angle b, Angle c, std::int64_t n_pairs,
                            CorrelationMode mode, std::uint64_t seed) {
    if (a == b || a == c || b == c) throw std::invalid_argument("bell_trial needs three distinct angles");
    const Angle seps[3] = {b - a, c - a, c - b};
    Estimate est[3];
    for (std::uint64_t i = 0; i < 3; ++i)
        est[i] = estimate_point(simulate_batch(d, seps[i], n_pairs, mode, stream_seed(seed, i)), mode);
    BellTrial r;
    r.e_ab = est[0].point.e_hv;
    r.e_ac = est[1].point.e_hv;
    r.e_bc = est[2].point.e_hv;
    r.lhs = std::abs(r.e_ab - r.e_ac);
    r.rhs = 1.0 + r.e_bc;
    r.lhs_se = std::hypot(est[0].se_e, est[1].se_e);
    r.rhs_se = est[2].se_e;
    return r;
}

}  // namespace lhv::mc
