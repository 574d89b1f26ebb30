#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nld/detail/linfit.hpp"
#include "nld/series.hpp"

namespace nld {

/// Averaged rescaled range at one window size.
struct RsPoint {
    std::size_t w = 0;  // window length, samples
    double rs = 0.0;    // mean R/S over the non-degenerate windows of that size
};

/// Log-log regression result of the R/S analysis. h near 0.5 indicates a
/// memoryless series, above 0.5 persistence, below 0.5 anti-persistence.
/// Finite-sample regression can leave (0,1); h_in_range flags that instead of
/// clamping.
struct HurstFit {
    double h = 0.0;
    double log_k = 0.0;  // intercept, log of the power-law constant
    double r_squared = 0.0;
    std::vector<RsPoint> points;
    bool h_in_range = true;  // h in (0, 1)
};

/// Window-size grid: n_windows log-spaced sizes from w_min up to
/// w_max_fraction of the series length, duplicates removed.
struct HurstConfig {
    std::size_t w_min = 16;
    double w_max_fraction = 0.25;
    std::size_t n_windows = 20;
};

/// y_i of the window starting at t0: running sum of the first i deviations
/// from the window mean (1 <= i <= w). y_w is zero by construction.
inline double cumulative_deviation(const SampledSeries& x, std::size_t t0, std::size_t w,
                                   std::size_t i) {
    detail::check_window(x, t0, w);
    if (i < 1 || i > w)
        throw std::out_of_range("cumulative_deviation: offset i must satisfy 1 <= i <= w");
    const double mean = window_mean(x, t0, w);
    double sum = 0.0;
    for (std::size_t k = t0; k < t0 + i; ++k) sum += x[k] - mean;
    return sum;
}

/// (max_i y_i - min_i y_i) / window standard deviation.
inline double rescaled_range(const SampledSeries& x, std::size_t t0, std::size_t w) {
    if (w < 8)
        throw std::invalid_argument("rescaled_range: window must be >= 8 samples");
    detail::check_window(x, t0, w);
    const WindowStats st = window_stats(x, t0, w);
    if (st.std <= 0.0)
        throw std::invalid_argument("rescaled_range: degenerate (constant) window");
    double cum = 0.0;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t k = t0; k < t0 + w; ++k) {
        cum += x[k] - st.mean;
        if (first) {
            lo = hi = cum;
            first = false;
        } else {
            lo = std::min(lo, cum);
            hi = std::max(hi, cum);
        }
    }
    return (hi - lo) / st.std;
}

namespace detail {

inline std::vector<std::size_t> hurst_window_grid(std::size_t n, const HurstConfig& cfg) {
    const std::size_t w_max = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * cfg.w_max_fraction));
    if (w_max < cfg.w_min)
        throw std::invalid_argument("hurst_exponent: series too short for the window grid");
    std::vector<std::size_t> ws;
    const double lo = std::log(static_cast<double>(cfg.w_min));
    const double hi = std::log(static_cast<double>(w_max));
    for (std::size_t j = 0; j < cfg.n_windows; ++j) {
        const double t = cfg.n_windows == 1
                             ? 0.0
                             : static_cast<double>(j) / static_cast<double>(cfg.n_windows - 1);
        const auto w = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
        ws.push_back(std::clamp<std::size_t>(w, cfg.w_min, w_max));
    }
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    return ws;
}

} // namespace detail

/// R/S Hurst exponent: average the rescaled range over non-overlapping
/// windows at each grid size, then fit log(R/S) against log(w). The slope is
/// h, the intercept the log of the power-law constant.
inline HurstFit hurst_exponent(const SampledSeries& x, const HurstConfig& cfg = {}) {
    if (cfg.w_min < 8)
        throw std::invalid_argument("HurstConfig: w_min must be >= 8");
    if (!(cfg.w_max_fraction > 0.0) || cfg.w_max_fraction > 0.5)
        throw std::invalid_argument("HurstConfig: w_max_fraction must lie in (0, 0.5]");
    if (cfg.n_windows < 4)
        throw std::invalid_argument("HurstConfig: n_windows must be >= 4");
    if (x.size() < 4 * cfg.w_min)
        throw std::invalid_argument("hurst_exponent: need at least 4 * w_min samples");

    HurstFit fit;
    for (std::size_t w : detail::hurst_window_grid(x.size(), cfg)) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t t0 = 0; t0 + w <= x.size(); t0 += w) {
            if (window_std(x, t0, w) <= 0.0) continue;  // constant window, R/S undefined
            sum += rescaled_range(x, t0, w);
            ++count;
        }
        if (count == 0) continue;  // all windows degenerate at this size
        fit.points.push_back({w, sum / static_cast<double>(count)});
    }
    if (fit.points.size() < 4)
        throw std::invalid_argument("hurst_exponent: fewer than 4 usable window sizes");

    std::vector<double> lw, lrs;
    lw.reserve(fit.points.size());
    lrs.reserve(fit.points.size());
    for (const RsPoint& p : fit.points) {
        lw.push_back(std::log(static_cast<double>(p.w)));
        lrs.push_back(std::log(p.rs));
    }
    const detail::LineFit line = detail::fit_line(lw, lrs);
    fit.h = line.slope;
    fit.log_k = line.intercept;
    fit.r_squared = line.r_squared;
    fit.h_in_range = fit.h > 0.0 && fit.h < 1.0;
    return fit;
}

} // namespace nld
