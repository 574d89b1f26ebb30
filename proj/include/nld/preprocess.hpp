#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nld/detail/linfit.hpp"
#include "nld/series.hpp"

namespace nld {

/// Conditioning-chain parameters: 1 Hz high-pass and 50 Hz notch by default,
/// applied zero-phase (forward-backward).
struct FilterSpec {
    double highpass_cutoff = 1.0;  // Hz
    double notch_freq = 50.0;      // Hz
    double notch_q = 30.0;         // bandwidth = notch_freq / notch_q
    int filter_order = 4;          // Butterworth order, even and positive
    bool zero_phase = true;
};

/// One second-order IIR section, coefficients normalized so a0 = 1.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

using SosChain = std::vector<Biquad>;

namespace detail {

/// Butterworth high-pass as cascaded biquads (even order only).
/// Analog prototype poles -> LP->HP transform -> bilinear, each conjugate
/// pair becomes one section with both zeros at z = 1, gain pinned to unity
/// at Nyquist.
inline SosChain butterworth_highpass(double cutoff_hz, double fs, int order) {
    if (order < 2 || order % 2 != 0)
        throw std::invalid_argument("butterworth_highpass: order must be even and positive");
    if (!(cutoff_hz > 0.0) || cutoff_hz >= fs / 2.0)
        throw std::invalid_argument("butterworth_highpass: cutoff must lie in (0, Nyquist)");

    const double warped = 2.0 * fs * std::tan(std::numbers::pi * cutoff_hz / fs);
    SosChain sos;
    sos.reserve(static_cast<std::size_t>(order / 2));
    for (int k = 0; k < order / 2; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
        const std::complex<double> lp_pole(std::cos(theta), std::sin(theta));
        const std::complex<double> hp_pole = warped / lp_pole;
        // bilinear transform, T = 1/fs
        const std::complex<double> zp = (2.0 * fs + hp_pole) / (2.0 * fs - hp_pole);
        Biquad s;
        s.a1 = -2.0 * zp.real();
        s.a2 = std::norm(zp);
        const double gain = (1.0 - s.a1 + s.a2) / 4.0;  // unity at z = -1
        s.b0 = gain;
        s.b1 = -2.0 * gain;
        s.b2 = gain;
        sos.push_back(s);
    }
    return sos;
}

/// Second-order notch at f0 with quality factor q (unit gain at DC and Nyquist).
inline Biquad notch_biquad(double f0, double fs, double q) {
    if (!(f0 > 0.0) || f0 >= fs / 2.0)
        throw std::invalid_argument("notch_biquad: center frequency must lie in (0, Nyquist)");
    if (!(q > 0.0))
        throw std::invalid_argument("notch_biquad: q must be positive");
    const double w0 = 2.0 * std::numbers::pi * f0 / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    s.b0 = 1.0 / a0;
    s.b1 = -2.0 * std::cos(w0) / a0;
    s.b2 = 1.0 / a0;
    s.a1 = -2.0 * std::cos(w0) / a0;
    s.a2 = (1.0 - alpha) / a0;
    return s;
}

/// Single forward pass through one section (transposed direct form II).
/// State starts at the step-response fixed point for the first input sample,
/// which removes the startup transient for locally constant inputs.
inline void filter_section(const Biquad& s, std::vector<double>& x) {
    if (x.empty()) return;
    const double dc_gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double x0 = x.front();
    const double y0 = dc_gain * x0;
    double z1 = y0 - s.b0 * x0;
    double z2 = s.b2 * x0 - s.a2 * y0;
    for (double& v : x) {
        const double in = v;
        const double out = s.b0 * in + z1;
        z1 = s.b1 * in - s.a1 * out + z2;
        z2 = s.b2 * in - s.a2 * out;
        v = out;
    }
}

inline std::vector<double> sos_filter_forward(const SosChain& sos, std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    for (const Biquad& s : sos) filter_section(s, y);
    return y;
}

/// Forward-backward filtering with odd-reflection padding at both ends.
inline std::vector<double> sos_filtfilt(const SosChain& sos, std::span<const double> x,
                                        std::size_t pad_len) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t pad = std::min(pad_len, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    for (const Biquad& s : sos) filter_section(s, ext);
    std::reverse(ext.begin(), ext.end());
    for (const Biquad& s : sos) filter_section(s, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                               ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

} // namespace detail

/// Magnitude of the section chain at frequency f (single pass). With
/// zero_phase the effective response of the applied filter is this squared.
inline double sos_magnitude(const SosChain& sos, double f, double fs) {
    const double w = 2.0 * std::numbers::pi * f / fs;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    double mag = 1.0;
    for (const Biquad& s : sos) {
        const std::complex<double> num = s.b0 + s.b1 * z1 + s.b2 * z2;
        const std::complex<double> den = 1.0 + s.a1 * z1 + s.a2 * z2;
        mag *= std::abs(num) / std::abs(den);
    }
    return mag;
}

/// Magnitude response of the filter as actually applied by highpass()/notch():
/// squared when spec.zero_phase is set.
inline double applied_magnitude(const SosChain& sos, const FilterSpec& spec, double f, double fs) {
    const double m = sos_magnitude(sos, f, fs);
    return spec.zero_phase ? m * m : m;
}

/// Residual after subtracting the least-squares straight line over the full
/// series. The output has (numerically) zero mean and zero fitted slope.
inline SampledSeries detrend_linear(const SampledSeries& x) {
    if (x.size() < 2)
        throw std::invalid_argument("detrend_linear: need at least 2 samples");
    std::vector<double> idx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) idx[i] = static_cast<double>(i);
    const detail::LineFit fit = detail::fit_line(idx, x.samples());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] - (fit.intercept + fit.slope * static_cast<double>(i));
    return SampledSeries(std::move(out), x.sample_rate());
}

namespace detail {

inline SampledSeries apply_chain(const SampledSeries& x, const SosChain& sos,
                                 bool zero_phase, int order) {
    std::vector<double> y;
    if (zero_phase)
        y = sos_filtfilt(sos, x.samples(), static_cast<std::size_t>(3 * order));
    else
        y = sos_filter_forward(sos, x.samples());
    return SampledSeries(std::move(y), x.sample_rate());
}

} // namespace detail

/// Butterworth high-pass of spec.filter_order at spec.highpass_cutoff.
inline SampledSeries highpass(const SampledSeries& x, const FilterSpec& spec) {
    const SosChain sos = detail::butterworth_highpass(spec.highpass_cutoff, x.sample_rate(),
                                                      spec.filter_order);
    return detail::apply_chain(x, sos, spec.zero_phase, spec.filter_order);
}

/// Second-order IIR notch at spec.notch_freq with bandwidth notch_freq/notch_q.
inline SampledSeries notch(const SampledSeries& x, const FilterSpec& spec) {
    const SosChain sos{detail::notch_biquad(spec.notch_freq, x.sample_rate(), spec.notch_q)};
    return detail::apply_chain(x, sos, spec.zero_phase, 2);
}

/// Full-chain validity check for a given sample rate.
inline void validate_filter_spec(const FilterSpec& spec, double sample_rate) {
    if (!(spec.highpass_cutoff > 0.0) || !(spec.highpass_cutoff < spec.notch_freq) ||
        !(spec.notch_freq < sample_rate / 2.0))
        throw std::invalid_argument(
            "FilterSpec: requires 0 < highpass_cutoff < notch_freq < sample_rate/2");
    if (!(spec.notch_q > 0.0))
        throw std::invalid_argument("FilterSpec: notch_q must be positive");
    if (spec.filter_order < 2 || spec.filter_order % 2 != 0)
        throw std::invalid_argument("FilterSpec: filter_order must be even and positive");
}

/// Multi-channel recording frame: named columns sharing one sample rate.
struct ChannelFrame {
    std::vector<std::string> channels;
    std::vector<std::vector<double>> columns;  // one per channel
    double sample_rate = 0.0;
};

/// Extract one named channel as a SampledSeries carrying the frame's rate.
inline SampledSeries select_channel(const ChannelFrame& frame, const std::string& name) {
    for (std::size_t i = 0; i < frame.channels.size(); ++i) {
        if (frame.channels[i] == name)
            return SampledSeries(frame.columns[i], frame.sample_rate);
    }
    std::string available;
    for (std::size_t i = 0; i < frame.channels.size(); ++i) {
        if (i) available += ", ";
        available += frame.channels[i];
    }
    throw std::invalid_argument("select_channel: unknown channel '" + name +
                                "' (available: " + available + ")");
}

} // namespace nld
