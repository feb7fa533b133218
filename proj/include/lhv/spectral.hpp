#pragma once

// Correlation and pair-rate integrals as discrete circular autoconvolutions:
// transform the sampled density, square the spectrum, transform back.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lhv/core.hpp"

namespace lhv::spectral {

using Spectrum = std::vector<std::complex<double>>;

/// Samples of a 2pi-periodic function at nodes 2pi k / N.
struct SampledSignal {
    std::vector<double> samples;

    SampledSignal() = default;
    explicit SampledSignal(std::vector<double> s) : samples(std::move(s)) {
        if (samples.size() < 4) throw std::invalid_argument("sampled signal needs N >= 4");
    }
    std::size_t size() const { return samples.size(); }
    double node(std::size_t k) const { return kTwoPi * static_cast<double>(k) / static_cast<double>(size()); }
};

namespace detail {
// exp(-2 pi i k / N) for k < N; products j*k are reduced mod N before lookup,
// which keeps the twiddles accurate for large indices.
inline Spectrum twiddles(std::size_t n) {
    Spectrum w(n);
    for (std::size_t k = 0; k < n; ++k) {
        double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return w;
}

inline Spectrum transform(const Spectrum& x, bool inverse) {
    const std::size_t n = x.size();
    auto w = twiddles(n);
    Spectrum out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            auto tw = w[(j * k) % n];
            acc += x[j] * (inverse ? std::conj(tw) : tw);
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}
}  // namespace detail

/// Forward transform, F_k = sum_j x_j exp(-2 pi i j k / N).
inline Spectrum dft(const SampledSignal& s) {
    Spectrum x(s.samples.begin(), s.samples.end());
    return detail::transform(x, false);
}

/// Inverse of dft(), including the 1/N factor.
inline Spectrum inverse_dft(const Spectrum& spec) {
    if (spec.empty()) throw std::invalid_argument("inverse_dft of empty spectrum");
    return detail::transform(spec, true);
}

/// Complex result of inverse(F^2) * 2pi/N before the real part is taken.
/// A real input always convolves to a real output, so any imaginary residue
/// is rounding noise or a bug.
inline Spectrum autoconvolve_complex(const SampledSignal& s) {
    auto spec = dft(s);
    for (auto& v : spec) v *= v;
    auto back = inverse_dft(spec);
    const double scale = kTwoPi / static_cast<double>(s.size());
    for (auto& v : back) v *= scale;
    return back;
}

/// Samples of the integral of f(th) f(x - th) over one period at the nodes.
inline SampledSignal autoconvolve(const SampledSignal& s) {
    auto back = autoconvolve_complex(s);
    std::vector<double> out(back.size());
    for (std::size_t k = 0; k < back.size(); ++k) out[k] = back[k].real();
    return SampledSignal(std::move(out));
}

inline SampledSignal sample_density(const DetectionDensity& d, std::size_t n, bool magnitude = false) {
    if (n < 4) throw std::invalid_argument("spectral sampling needs N >= 4");
    std::vector<double> v(n);
    // Nodes past pi are taken as -2pi(N-k)/N so that an even density yields
    // exactly mirrored samples.
    for (std::size_t k = 0; k < n; ++k) {
        double node = 2 * k <= n ? kTwoPi * static_cast<double>(k) / static_cast<double>(n)
                                 : -kTwoPi * static_cast<double>(n - k) / static_cast<double>(n);
        double x = d(node);
        v[k] = magnitude ? std::abs(x) : x;
    }
    return SampledSignal(std::move(v));
}

/// f(x_k) == f(x_{N-k}) on all nodes, to tol.
inline bool is_even_on_nodes(const SampledSignal& s, double tol = 1e-12) {
    const std::size_t n = s.size();
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(s.samples[k] - s.samples[n - k]) > tol) return false;
    return true;
}

/// c, t and E at the N nodes 2pi k/N. Convolution equals the correlation
/// integral only for even densities, so odd or asymmetric ones are refused.
inline Curve spectral_curve(const DetectionDensity& d, std::size_t n, CorrelationMode mode) {
    auto f = sample_density(d, n);
    if (!is_even_on_nodes(f))
        throw NotEvenError("density '" + d.name() + "' is not even; autoconvolution would not equal the correlation");
    auto c = autoconvolve(f);
    auto t = autoconvolve(sample_density(d, n, true));
    const double sigma = mode_sign(mode);
    Curve out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        CurvePoint pt;
        pt.phi = Angle(f.node(k));
        pt.t = t.samples[k];
        if (!(pt.t > 1e-12)) throw DegenerateRateError("pair rate t(phi) vanishes; E cannot be normalized");
        pt.c = sigma * c.samples[k];
        // separate transforms can leave |c| a few ulps above t
        pt.e_hv = std::clamp(pt.c / pt.t, -1.0, 1.0);
        pt.e_ref = qm_expectation(pt.phi, mode);
        out.push_back(pt);
    }
    return out;
}

}  // namespace lhv::spectral
