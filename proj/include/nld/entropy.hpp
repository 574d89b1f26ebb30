#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nld/series.hpp"

namespace nld {

/// Equal-width amplitude histogram over [min, max] of a signal. The maximum
/// sample is assigned to the last bin; probabilities sum to 1.
struct AmplitudeHistogram {
    std::size_t m = 0;                  // bin count
    std::vector<double> probabilities;  // size m
    std::vector<double> edges;          // size m + 1
};

/// Shannon entropy in nats (natural log), scaled by the measuring-unit
/// constant c. Always in [0, c * ln m].
struct EntropyResult {
    double s = 0.0;
    double c = 1.0;
    std::size_t m = 0;
};

inline AmplitudeHistogram histogram(const SampledSeries& x, std::size_t m) {
    if (m < 1)
        throw std::invalid_argument("histogram: bin count must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(x.samples().begin(), x.samples().end());
    const double lo = *lo_it, hi = *hi_it;

    AmplitudeHistogram h;
    h.m = m;
    h.edges.resize(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(m);
        h.edges[k] = lo + t * (hi - lo);
    }
    h.edges.back() = hi;

    std::vector<std::size_t> counts(m, 0);
    if (hi > lo) {
        const double scale = static_cast<double>(m) / (hi - lo);
        for (double v : x.samples()) {
            auto idx = static_cast<std::size_t>((v - lo) * scale);
            if (idx >= m) idx = m - 1;  // v == max lands in the last bin
            ++counts[idx];
        }
    } else {
        counts[0] = x.size();  // constant signal: all mass in one bin
    }

    h.probabilities.resize(m);
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < m; ++k)
        h.probabilities[k] = static_cast<double>(counts[k]) / n;
    return h;
}

/// S = -c * sum p_i ln p_i with the 0 ln 0 = 0 convention.
inline EntropyResult shannon_entropy(const AmplitudeHistogram& h, double c = 1.0) {
    if (h.m < 1 || h.probabilities.size() != h.m)
        throw std::invalid_argument("shannon_entropy: malformed histogram");
    double total = 0.0;
    for (double p : h.probabilities) {
        if (p < 0.0)
            throw std::invalid_argument("shannon_entropy: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("shannon_entropy: probabilities must sum to 1");

    double s = 0.0;
    for (double p : h.probabilities) {
        if (p > 0.0) s -= p * std::log(p);
    }
    return {c * s, c, h.m};
}

inline EntropyResult signal_entropy(const SampledSeries& x, std::size_t m = 128, double c = 1.0) {
    return shannon_entropy(histogram(x, m), c);
}

} // namespace nld
