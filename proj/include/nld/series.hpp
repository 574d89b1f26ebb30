#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nld {

/// Uniformly sampled scalar signal. Samples are validated once at
/// construction; every estimator downstream assumes finite, contiguous data.
class SampledSeries {
public:
    SampledSeries(std::vector<double> samples, double sample_rate)
        : samples_(std::move(samples)), sample_rate_(sample_rate) {
        if (samples_.empty())
            throw std::invalid_argument("SampledSeries: empty sample vector");
        if (!std::isfinite(sample_rate_) || sample_rate_ <= 0.0)
            throw std::invalid_argument("SampledSeries: sample_rate must be positive");
        for (double v : samples_) {
            if (!std::isfinite(v))
                throw std::invalid_argument("SampledSeries: non-finite sample");
        }
    }

    const std::vector<double>& samples() const noexcept { return samples_; }
    double sample_rate() const noexcept { return sample_rate_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

private:
    std::vector<double> samples_;
    double sample_rate_;
};

/// Windowed mean and sample standard deviation (denominator w-1).
struct WindowStats {
    double mean = 0.0;
    double std = 0.0;
};

/// True for the canonical simulator session tokens:
/// {DAY,FOG,NIGHT,RAIN}_DRIVING_{A,B,C,D}.
inline bool is_canonical_session_label(const std::string& label) {
    static const char* envs[] = {"DAY", "FOG", "NIGHT", "RAIN"};
    for (const char* env : envs) {
        const std::string prefix = std::string(env) + "_DRIVING_";
        if (label.size() == prefix.size() + 1 && label.compare(0, prefix.size(), prefix) == 0) {
            char x = label.back();
            return x >= 'A' && x <= 'D';
        }
    }
    return false;
}

/// One recording tagged with its table-row identity.
class SessionRecord {
public:
    SessionRecord(int subject_id, std::string session_label, double age,
                  double experience, SampledSeries series)
        : subject_id_(subject_id),
          session_label_(std::move(session_label)),
          age_(age),
          experience_(experience),
          series_(std::move(series)) {
        if (subject_id_ <= 0)
            throw std::invalid_argument("SessionRecord: subject_id must be positive");
        if (!is_canonical_session_label(session_label_))
            throw std::invalid_argument("SessionRecord: invalid session label '" +
                                        session_label_ + "'");
        if (experience_ < 0.0 || age_ < experience_)
            throw std::invalid_argument("SessionRecord: requires age >= experience >= 0");
    }

    int subject_id() const noexcept { return subject_id_; }
    const std::string& session_label() const noexcept { return session_label_; }
    double age() const noexcept { return age_; }
    double experience() const noexcept { return experience_; }
    const SampledSeries& series() const noexcept { return series_; }

private:
    int subject_id_;
    std::string session_label_;
    double age_;
    double experience_;
    SampledSeries series_;
};

namespace detail {

inline void check_window(const SampledSeries& x, std::size_t t0, std::size_t w) {
    if (w < 1)
        throw std::out_of_range("window length must be >= 1");
    if (t0 > x.size() || w > x.size() - t0)
        throw std::out_of_range("window [" + std::to_string(t0) + ", " +
                                std::to_string(t0 + w) + ") out of range for series of length " +
                                std::to_string(x.size()));
}

} // namespace detail

/// Arithmetic mean of the w samples starting at t0.
inline double window_mean(const SampledSeries& x, std::size_t t0, std::size_t w) {
    detail::check_window(x, t0, w);
    double sum = 0.0;
    for (std::size_t i = t0; i < t0 + w; ++i) sum += x[i];
    return sum / static_cast<double>(w);
}

/// Sample standard deviation (denominator w-1) of the w samples starting at t0.
inline double window_std(const SampledSeries& x, std::size_t t0, std::size_t w) {
    if (w < 2)
        throw std::invalid_argument("window_std: degenerate window (w < 2)");
    detail::check_window(x, t0, w);
    const double mean = window_mean(x, t0, w);
    double ss = 0.0;
    for (std::size_t i = t0; i < t0 + w; ++i) {
        const double d = x[i] - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(w - 1));
}

inline WindowStats window_stats(const SampledSeries& x, std::size_t t0, std::size_t w) {
    return {window_mean(x, t0, w), window_std(x, t0, w)};
}

/// Consecutive non-overlapping epochs of epoch_len samples; a trailing
/// remainder shorter than epoch_len is discarded. epoch_len > length is not
/// an error, it simply yields no epochs.
inline std::vector<SampledSeries> epoch_split(const SampledSeries& x, std::size_t epoch_len) {
    if (epoch_len < 1)
        throw std::invalid_argument("epoch_split: epoch_len must be >= 1");
    std::vector<SampledSeries> epochs;
    const std::size_t count = x.size() / epoch_len;
    epochs.reserve(count);
    for (std::size_t e = 0; e < count; ++e) {
        const auto begin = x.samples().begin() + static_cast<std::ptrdiff_t>(e * epoch_len);
        epochs.emplace_back(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(epoch_len)),
                            x.sample_rate());
    }
    return epochs;
}

} // namespace nld
