#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nld/preprocess.hpp"
#include "oracles.hpp"

using namespace nld;

namespace {

std::vector<double> sine(double freq, double fs, std::size_t n, double amp = 1.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs);
    return out;
}

/// Steady-state amplitude of a sinusoid at freq, fit over the middle half.
double fitted_amplitude(const std::vector<double>& y, double freq, double fs) {
    const std::size_t lo = y.size() / 4, hi = 3 * y.size() / 4;
    double scc = 0, sss = 0, scs = 0, syc = 0, sys = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double ph = 2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs;
        const double c = std::cos(ph), s = std::sin(ph);
        scc += c * c;
        sss += s * s;
        scs += c * s;
        syc += y[i] * c;
        sys += y[i] * s;
    }
    const double det = scc * sss - scs * scs;
    const double a = (sys * scc - syc * scs) / det;
    const double b = (syc * sss - sys * scs) / det;
    return std::hypot(a, b);
}

double db(double ratio) { return 20.0 * std::log10(ratio); }

} // namespace

TEST_CASE("detrend_linear removes exact lines", "[preprocess]") {
    std::vector<double> ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    const SampledSeries out = detrend_linear(SampledSeries(ramp, 300.0));
    for (double v : out.samples()) CHECK(std::abs(v) < 1e-9);

    const SampledSeries flat = detrend_linear(SampledSeries(std::vector<double>(50, 5.0), 300.0));
    for (double v : flat.samples()) CHECK(std::abs(v) < 1e-9);

    CHECK_THROWS_AS(detrend_linear(SampledSeries({1.0}, 300.0)), std::invalid_argument);
}

TEST_CASE("detrend_linear on ramp plus sine recovers the sine residual", "[preprocess]") {
    // superposition: the fitted line of (ramp + sine) is the ramp plus the
    // independently fitted line of the sine alone
    const double fs = 300.0;
    const std::size_t n = 3000;
    const std::vector<double> s = sine(10.0, fs, n);
    std::vector<double> mix(n), idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = static_cast<double>(i);
        mix[i] = 0.25 * static_cast<double>(i) + s[i];
    }
    const auto [slope, intercept] = oracle::naive_line(idx, s);

    const SampledSeries out = detrend_linear(SampledSeries(mix, fs));
    for (std::size_t i = 0; i < n; ++i) {
        const double expected = s[i] - (intercept + slope * static_cast<double>(i));
        CHECK(std::abs(out[i] - expected) < 1e-6);
    }
}

TEST_CASE("detrend_linear is idempotent", "[preprocess]") {
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    std::vector<double> x(512);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = dist(rng) + 0.03 * static_cast<double>(i);
    const SampledSeries once = detrend_linear(SampledSeries(x, 300.0));
    const SampledSeries twice = detrend_linear(once);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(once[i] - twice[i]) < 1e-9);
}

TEST_CASE("high-pass attenuation figures from the analytic response", "[preprocess]") {
    const double fs = 300.0;
    FilterSpec spec;  // defaults: 1 Hz, order 4, zero-phase
    const SosChain sos = detail::butterworth_highpass(spec.highpass_cutoff, fs, spec.filter_order);

    CHECK(db(applied_magnitude(sos, spec, 0.1, fs)) <= -30.0);
    CHECK(std::abs(db(applied_magnitude(sos, spec, 10.0, fs))) <= 1.0);
    // DC is removed outright
    CHECK(sos_magnitude(sos, 0.0, fs) < 1e-12);
}

TEST_CASE("high-pass behaviour in the time domain", "[preprocess]") {
    const double fs = 300.0;
    FilterSpec spec;

    // a pure DC offset dies away completely
    const SampledSeries dc(std::vector<double>(2048, 10.0), fs);
    const SampledSeries hp = highpass(dc, spec);
    for (std::size_t i = hp.size() / 4; i < 3 * hp.size() / 4; ++i)
        CHECK(std::abs(hp[i]) < 1e-3 * 10.0);

    // a 10 Hz sine survives within 1 dB, measured against the analytic response
    const SampledSeries tone(sine(10.0, fs, 4096), fs);
    const double measured = fitted_amplitude(highpass(tone, spec).samples(), 10.0, fs);
    CHECK(std::abs(db(measured)) <= 1.0);
    const SosChain sos = detail::butterworth_highpass(spec.highpass_cutoff, fs, spec.filter_order);
    CHECK(measured ==
          Catch::Approx(applied_magnitude(sos, spec, 10.0, fs)).epsilon(1e-3));

    // a 0.1 Hz sine is suppressed by at least 30 dB
    const SampledSeries slow(sine(0.1, fs, 1 << 16), fs);
    const double slow_amp = fitted_amplitude(highpass(slow, spec).samples(), 0.1, fs);
    CHECK(db(slow_amp) <= -30.0);

    FilterSpec bad;
    bad.highpass_cutoff = 200.0;  // past Nyquist at fs = 300
    CHECK_THROWS_AS(highpass(tone, bad), std::invalid_argument);
}

TEST_CASE("notch attenuation figures", "[preprocess]") {
    const double fs = 300.0;
    FilterSpec spec;
    const Biquad nb = detail::notch_biquad(spec.notch_freq, fs, spec.notch_q);
    const SosChain sos{nb};

    CHECK(db(applied_magnitude(sos, spec, 50.0, fs)) <= -30.0);
    CHECK(std::abs(db(applied_magnitude(sos, spec, 10.0, fs))) <= 1.0);

    // measured on signals
    const SampledSeries hum(sine(50.0, fs, 8192), fs);
    CHECK(db(fitted_amplitude(notch(hum, spec).samples(), 50.0, fs)) <= -30.0);
    const SampledSeries tone(sine(10.0, fs, 8192), fs);
    CHECK(std::abs(db(fitted_amplitude(notch(tone, spec).samples(), 10.0, fs))) <= 1.0);

    // DC gain of the notch is exactly 1: constants pass through unchanged
    const SampledSeries dc(std::vector<double>(1024, 3.5), fs);
    const SampledSeries out = notch(dc, spec);
    for (double v : out.samples()) CHECK(std::abs(v - 3.5) < 1e-6);

    FilterSpec bad;
    bad.notch_freq = 150.0;  // Nyquist at fs = 300
    CHECK_THROWS_AS(notch(dc, bad), std::invalid_argument);
}

TEST_CASE("filters are linear operators", "[preprocess]") {
    const double fs = 300.0;
    std::mt19937 rng(11);
    std::normal_distribution<double> dist;
    std::vector<double> xa(1024), xb(1024);
    for (std::size_t i = 0; i < xa.size(); ++i) {
        xa[i] = dist(rng);
        xb[i] = dist(rng);
    }
    const double a = 1.7, b = -0.6;
    std::vector<double> mix(1024);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * xa[i] + b * xb[i];

    for (bool zero_phase : {true, false}) {
        FilterSpec spec;
        spec.zero_phase = zero_phase;
        for (auto op : {&highpass, &notch}) {
            const SampledSeries fa = op(SampledSeries(xa, fs), spec);
            const SampledSeries fb = op(SampledSeries(xb, fs), spec);
            const SampledSeries fmix = op(SampledSeries(mix, fs), spec);
            double scale = 0.0;
            for (std::size_t i = 0; i < mix.size(); ++i)
                scale = std::max(scale, std::abs(fmix[i]));
            for (std::size_t i = 0; i < mix.size(); ++i) {
                const double expected = a * fa[i] + b * fb[i];
                CHECK(std::abs(fmix[i] - expected) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("zero-phase filtering introduces no lag", "[preprocess]") {
    const double fs = 300.0;
    FilterSpec spec;
    const std::vector<double> x = sine(10.0, fs, 4096);
    const SampledSeries y = notch(highpass(SampledSeries(x, fs), spec), spec);

    // cross-correlation of input and output over a trimmed interior
    const std::size_t lo = 512, hi = 3584;
    int best_lag = -100;
    double best = -1e300;
    for (int lag = -20; lag <= 20; ++lag) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            acc += x[i] * y[static_cast<std::size_t>(static_cast<long>(i) + lag)];
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    CHECK(best_lag == 0);
}

TEST_CASE("select_channel picks the named column", "[preprocess]") {
    ChannelFrame frame;
    frame.channels = {"F3", "F4"};
    frame.columns = {{1, 2, 3}, {4, 5, 6}};
    frame.sample_rate = 300.0;

    const SampledSeries f4 = select_channel(frame, "F4");
    CHECK(f4.samples() == std::vector<double>{4, 5, 6});
    CHECK(f4.sample_rate() == 300.0);

    CHECK_THROWS_WITH(select_channel(frame, "XX"),
                      Catch::Matchers::ContainsSubstring("F3") &&
                          Catch::Matchers::ContainsSubstring("F4"));

    // the full headset layout
    ChannelFrame headset;
    headset.channels = {"F3", "F4", "C3", "C4", "P3", "Pz", "P4"};
    headset.sample_rate = 300.0;
    for (int c = 0; c < 7; ++c) headset.columns.push_back({double(c), double(c) + 1});
    const SampledSeries pz = select_channel(headset, "Pz");
    CHECK(pz.samples() == std::vector<double>{5, 6});
}

TEST_CASE("filter spec chain validation", "[preprocess]") {
    FilterSpec spec;
    CHECK_NOTHROW(validate_filter_spec(spec, 300.0));
    CHECK_THROWS_AS(validate_filter_spec(spec, 90.0), std::invalid_argument);  // notch >= Nyquist
    FilterSpec odd;
    odd.filter_order = 3;
    CHECK_THROWS_AS(validate_filter_spec(odd, 300.0), std::invalid_argument);
    FilterSpec swapped;
    swapped.highpass_cutoff = 60.0;
    CHECK_THROWS_AS(validate_filter_spec(swapped, 300.0), std::invalid_argument);
}
