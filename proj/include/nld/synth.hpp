#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "nld/fractal.hpp"
#include "nld/series.hpp"

namespace nld {

/// Target for the fractional Gaussian noise generator. The cumulative sum of
/// the output is fractional Brownian motion with the same H.
struct FgnSpec {
    double h_true = 0.5;      // target Hurst exponent, in (0, 1)
    std::size_t n = 1024;     // length, a power of two >= 64
    std::uint64_t seed = 0;   // reproducibility seed
};

struct KochSpec {
    int depth = 5;  // recursion depth, 0..8 (point count 4^depth + 1)
};

namespace detail {

/// Standard normals from mt19937_64 via Box-Muller. The uniform source is
/// fully specified by the standard, so a seed reproduces the same stream on
/// every platform.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    // uniform on (0, 1]: 53 random bits, shifted away from zero
    double uniform_open() {
        const std::uint64_t bits = rng_() >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 FFT (size must be a power of two).
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

/// Exact fGn autocovariance gamma(k) = 0.5 (|k+1|^2H - 2|k|^2H + |k-1|^2H).
inline double fgn_autocovariance(double h, std::size_t k) {
    const double kk = static_cast<double>(k);
    const double e = 2.0 * h;
    return 0.5 * (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) +
                  std::pow(std::abs(kk - 1.0), e));
}

} // namespace detail

/// Stationary fractional Gaussian noise by circulant embedding of the exact
/// autocovariance (Davies-Harte). Deterministic per seed. The embedding is
/// nonnegative definite for H in (0, 1); a materially negative eigenvalue
/// indicates a broken covariance and raises.
inline SampledSeries gen_fgn(const FgnSpec& spec, double sample_rate = 1.0) {
    if (!(spec.h_true > 0.0) || !(spec.h_true < 1.0))
        throw std::invalid_argument("gen_fgn: h_true must lie in (0, 1)");
    if (spec.n < 64 || !detail::is_power_of_two(spec.n))
        throw std::invalid_argument("gen_fgn: n must be a power of two >= 64");

    const std::size_t n = spec.n;
    const std::size_t m = 2 * n;

    // circulant first row: gamma(0..n), then mirrored gamma(n-1..1)
    std::vector<std::complex<double>> eig(m);
    for (std::size_t k = 0; k <= n; ++k) eig[k] = detail::fgn_autocovariance(spec.h_true, k);
    for (std::size_t k = 1; k < n; ++k) eig[m - k] = eig[k];
    detail::fft_radix2(eig);

    double max_eig = 0.0;
    for (const auto& e : eig) max_eig = std::max(max_eig, e.real());
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double v = eig[k].real();
        if (v < -1e-9 * max_eig)
            throw std::logic_error("gen_fgn: circulant embedding produced a negative eigenvalue");
        lambda[k] = v > 0.0 ? v : 0.0;
    }

    detail::GaussianSampler gauss(spec.seed);
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<std::complex<double>> w(m);
    w[0] = std::sqrt(lambda[0] * inv_m) * gauss();
    w[n] = std::sqrt(lambda[n] * inv_m) * gauss();
    for (std::size_t k = 1; k < n; ++k) {
        const double scale = std::sqrt(0.5 * lambda[k] * inv_m);
        const double re = gauss();
        const double im = gauss();
        w[k] = std::complex<double>(scale * re, scale * im);
        w[m - k] = std::conj(w[k]);
    }
    detail::fft_radix2(w);  // Hermitian input, real output

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
    return SampledSeries(std::move(out), sample_rate);
}

/// Koch curve from a unit horizontal segment, bumps upward, normalized into
/// the unit square with aspect ratio preserved. Point count is 4^depth + 1
/// and every segment has length 3^-depth of the base.
inline PlanarCurve gen_koch(const KochSpec& spec) {
    if (spec.depth < 0)
        throw std::invalid_argument("gen_koch: depth must be >= 0");
    if (spec.depth > 8)
        throw std::invalid_argument("gen_koch: depth > 8 exceeds the point-count guard");

    std::vector<PlanarPoint> pts = {{0.0, 0.0}, {1.0, 0.0}};
    const double cos60 = 0.5;
    const double sin60 = std::sqrt(3.0) / 2.0;
    for (int level = 0; level < spec.depth; ++level) {
        std::vector<PlanarPoint> next;
        next.reserve((pts.size() - 1) * 4 + 1);
        next.push_back(pts.front());
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double dx = (pts[i + 1][0] - pts[i][0]) / 3.0;
            const double dy = (pts[i + 1][1] - pts[i][1]) / 3.0;
            const PlanarPoint a = {pts[i][0] + dx, pts[i][1] + dy};
            const PlanarPoint peak = {a[0] + dx * cos60 - dy * sin60,
                                      a[1] + dx * sin60 + dy * cos60};
            const PlanarPoint b = {pts[i][0] + 2.0 * dx, pts[i][1] + 2.0 * dy};
            next.push_back(a);
            next.push_back(peak);
            next.push_back(b);
            next.push_back(pts[i + 1]);
        }
        pts = std::move(next);
    }
    return normalize_to_unit_square(pts);
}

/// iid standard Gaussian samples, deterministic per seed.
inline SampledSeries gen_white(std::size_t n, std::uint64_t seed, double sample_rate = 1.0) {
    if (n < 1)
        throw std::invalid_argument("gen_white: n must be >= 1");
    detail::GaussianSampler gauss(seed);
    std::vector<double> out(n);
    for (double& v : out) v = gauss();
    return SampledSeries(std::move(out), sample_rate);
}

} // namespace nld
