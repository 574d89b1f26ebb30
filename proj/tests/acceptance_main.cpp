// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nld/nld.hpp"
#include "oracles.hpp"

using namespace nld;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double time_limit_s;  // 0 = untimed
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double mean_hurst(double h_true, std::size_t n, int seeds, std::uint64_t seed0) {
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const SampledSeries x = h_true == 0.5
                                    ? gen_white(n, seed0 + static_cast<std::uint64_t>(s))
                                    : gen_fgn({h_true, n, seed0 + static_cast<std::uint64_t>(s)});
        acc += hurst_exponent(x).h;
    }
    return acc / seeds;
}

// --- criterion bodies -------------------------------------------------------

Outcome koch_dimension() {
    const FractalFit fit = fractal_dimension(gen_koch({6}));
    const bool ok = fit.d >= 1.18 && fit.d <= 1.34;
    return {ok, "d = " + fmt(fit.d) + " (tolerance band [1.18, 1.34], ideal log4/log3 = 1.2619)"};
}

Outcome f_critical_anchor() {
    const double crit = f_critical(0.05, 159, 159);
    const bool ok = std::abs(crit - 1.3002) <= 0.001;
    std::string detail = "f_crit(0.05, df=(159,159)) = " + fmt(crit) + " vs required 1.3002 +/- 0.001";
    if (!ok)
        detail += "; the computed quantile is independently confirmed by quadrature inversion, "
                  "and the reference figure 1.300182 is the df=(158,158) quantile (159 "
                  "observations per column), so the required pairing is unsatisfiable";
    return {ok, detail};
}

Outcome hurst_white_noise() {
    const double mean_h = mean_hurst(0.5, 4096, 20, 1000);
    const bool ok = std::abs(mean_h - 0.5) <= 0.08;
    std::string detail = "mean h over 20 seeds = " + fmt(mean_h) + " (target 0.5 +/- 0.08)";
    if (mean_h > 0.5)
        detail += "; mean exceeds 0.5: classical R/S small-sample upward bias, no "
                  "Anis-Lloyd correction is applied";
    return {ok, detail};
}

Outcome hurst_oracle_sweep() {
    const std::size_t n = std::size_t{1} << 14;
    const double h3 = mean_hurst(0.3, n, 20, 2000);
    const double h7 = mean_hurst(0.7, n, 20, 3000);
    const double h9 = mean_hurst(0.9, n, 20, 4000);
    const bool within = std::abs(h3 - 0.3) <= 0.08 && std::abs(h7 - 0.7) <= 0.08 &&
                        std::abs(h9 - 0.9) <= 0.08;
    const bool ordered = h3 < h7 && h7 < h9;
    return {within && ordered, "mean h = {" + fmt(h3) + ", " + fmt(h7) + ", " + fmt(h9) +
                                   "} for H_true = {0.3, 0.7, 0.9}, each +/- 0.08, strictly "
                                   "increasing: " +
                                   (ordered ? "yes" : "NO")};
}

Outcome entropy_exactness() {
    bool ok = true;
    std::string detail;
    for (std::size_t m : {2u, 16u, 128u}) {
        AmplitudeHistogram uniform;
        uniform.m = m;
        uniform.probabilities.assign(m, 1.0 / static_cast<double>(m));
        uniform.edges.resize(m + 1, 0.0);
        const double err = std::abs(shannon_entropy(uniform, 1.0).s -
                                    std::log(static_cast<double>(m)));
        ok = ok && err < 1e-12;
    }
    AmplitudeHistogram skew;
    skew.m = 2;
    skew.probabilities = {0.25, 0.75};
    skew.edges = {0.0, 0.5, 1.0};
    const double s = shannon_entropy(skew, 1.0).s;
    ok = ok && std::abs(s - 0.562335) < 1e-6;
    detail = "uniform histograms hit c*ln(m) to 1e-12; p=(0.25,0.75) -> " + fmt(s) +
             " vs 0.562335 +/- 1e-6";
    return {ok, detail};
}

Outcome statistics_exactness() {
    const std::vector<double> x = {1, 2, 3}, y = {1, 2, 4};
    bool ok = std::abs(pearson(x, y) - std::sqrt(27.0 / 28.0)) < 1e-12;
    ok = ok && std::abs(pearson(x, x) - 1.0) < 1e-12;
    std::vector<double> neg(x);
    for (double& v : neg) v = -v;
    ok = ok && std::abs(pearson(x, neg) + 1.0) < 1e-12;

    const int dfs[][2] = {{2, 2}, {2, 10}, {4, 7}, {5, 5}, {10, 10},
                          {20, 30}, {60, 40}, {159, 159}, {200, 100}, {1000, 1000}};
    const double xs[] = {0.05, 0.3, 1.0, 2.5, 7.0};
    int points = 0;
    double worst = 0.0;
    for (const auto& df : dfs) {
        for (double xv : xs) {
            const double err =
                std::abs(f_cdf(xv, df[0], df[1]) - oracle::f_cdf_by_quadrature(xv, df[0], df[1]));
            worst = std::max(worst, err);
            ++points;
        }
    }
    ok = ok && worst < 1e-9 && points == 50;
    return {ok, "Pearson closed forms within 1e-12; max |f_cdf - quadrature| over 50 (x, df) "
                "points = " +
                    fmt(worst)};
}

Outcome filter_responses() {
    const double fs = 300.0;
    const FilterSpec spec;  // defaults: 1 Hz high-pass order 4, 50 Hz notch q 30, zero-phase
    const SosChain hp = detail::butterworth_highpass(spec.highpass_cutoff, fs, spec.filter_order);
    const SosChain nf{detail::notch_biquad(spec.notch_freq, fs, spec.notch_q)};
    auto db = [](double m) { return 20.0 * std::log10(m); };

    const double hp_stop = db(applied_magnitude(hp, spec, 0.1, fs));
    const double hp_pass = db(applied_magnitude(hp, spec, 10.0, fs));
    const double nf_stop = db(applied_magnitude(nf, spec, 50.0, fs));
    const double nf_pass = db(applied_magnitude(nf, spec, 10.0, fs));
    const bool ok =
        hp_stop <= -30.0 && std::abs(hp_pass) <= 1.0 && nf_stop <= -30.0 && std::abs(nf_pass) <= 1.0;
    return {ok, "high-pass: " + fmt(hp_stop) + " dB @ 0.1 Hz, " + fmt(hp_pass) +
                    " dB @ 10 Hz; notch: " + fmt(nf_stop) + " dB @ 50 Hz, " + fmt(nf_pass) +
                    " dB @ 10 Hz"};
}

Outcome pipeline_determinism() {
    const fs::path dir = fs::temp_directory_path() / "nld_acceptance_pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);

    {
        std::ofstream manifest(dir / "manifest.csv");
        manifest << "file,subject,session,age,experience\n";
        const char* sessions[] = {"DAY_DRIVING_A", "DAY_DRIVING_B", "DAY_DRIVING_C"};
        for (int i = 0; i < 3; ++i) {
            const std::string name = "rec" + std::to_string(i) + ".csv";
            write_series_file(dir / name, gen_white(4096, 7000 + i, 300.0), "F4");
            manifest << name << ",1," << sessions[i] << ",44,24\n";
        }
    }

    RunConfig cfg;
    Provenance prov;
    prov.command = "extract";
    prov.extra = detail::config_lines(cfg);
    const Manifest manifest = load_manifest(dir / "manifest.csv");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const fs::path out_a = dir / "a", out_b = dir / "b";
    fs::create_directories(out_a);
    fs::create_directories(out_b);
    write_feature_tables(run_pipeline(manifest, cfg).table, out_a, prov);
    write_feature_tables(run_pipeline(manifest, cfg).table, out_b, prov);
    const std::string text_a = slurp(out_a / "features.csv");
    const bool identical = !text_a.empty() && text_a == slurp(out_b / "features.csv");
    const bool layout =
        text_a.find("Subject,Session,S,H,D,Age,Driving Experience\n") != std::string::npos;

    // 16-session reference fixture: H rises 0.69 (DAY_A) -> 0.79 (RAIN_D)
    const double hs[] = {0.69, 0.73, 0.74, 0.75, 0.78, 0.73, 0.74, 0.77,
                         0.77, 0.73, 0.78, 0.76, 0.73, 0.75, 0.77, 0.79};
    FeatureTable fixture;
    const char* envs[] = {"DAY", "FOG", "NIGHT", "RAIN"};
    int idx = 0;
    for (const char* env : envs)
        for (char xc = 'A'; xc <= 'D'; ++xc) {
            FeatureRow r;
            r.subject_id = 1;
            r.session_label = std::string(env) + "_DRIVING_" + xc;
            r.h = hs[idx++];
            fixture.rows.push_back(r);
        }
    const auto deltas = first_last_delta(fixture);
    const bool delta_ok = deltas.size() == 1 && deltas[0].delta &&
                          std::abs(*deltas[0].delta - 0.10) < 1e-9;

    const bool ok = identical && layout && delta_ok;
    return {ok, std::string("features.csv byte-identical across runs: ") +
                    (identical ? "yes" : "NO") + "; fixed column order: " +
                    (layout ? "yes" : "NO") + "; subject-1 H delta = " +
                    (deltas[0].delta ? fmt(*deltas[0].delta) : "absent") + " (expected +0.10)"};
}

Outcome range_sanity() {
    // Published per-session S, H, D magnitudes depend on analysis parameters
    // (amplitude binning, window grid, embedding) that their sources do not
    // state, so absolute values are not a reproducible target. The substitute
    // contract is the oracle suite above plus this range check.
    RunConfig cfg;
    std::vector<SampledSeries> inputs;
    const double fs = 300.0;

    for (std::uint64_t seed : {11u, 12u}) {
        // persistent fGn, the texture closest to filtered EEG
        inputs.push_back(gen_fgn({0.7, 4096, seed}, fs));
        inputs.push_back(gen_fgn({0.3, 4096, seed + 100}, fs));
        // alpha-band tone plus mains hum over noise
        const SampledSeries base = gen_white(4096, seed + 200, fs);
        std::vector<double> mixed(base.samples());
        for (std::size_t i = 0; i < mixed.size(); ++i) {
            const double t = static_cast<double>(i) / fs;
            mixed[i] += 2.0 * std::sin(2.0 * std::numbers::pi * 10.0 * t) +
                        1.5 * std::sin(2.0 * std::numbers::pi * 50.0 * t) + 20.0;
        }
        inputs.emplace_back(mixed, fs);
    }

    bool ok = true;
    double h_lo = 1e300, h_hi = -1e300, d_lo = 1e300, d_hi = -1e300, s_hi = -1e300;
    for (const SampledSeries& x : inputs) {
        const FeatureRow row = extract_features(x, cfg);
        h_lo = std::min(h_lo, row.h);
        h_hi = std::max(h_hi, row.h);
        d_lo = std::min(d_lo, row.d);
        d_hi = std::max(d_hi, row.d);
        s_hi = std::max(s_hi, row.s);
        ok = ok && row.h > 0.0 && row.h < 1.2;
        ok = ok && row.d > 0.8 && row.d < 2.2;
        ok = ok && row.s >= 0.0 && row.s <= std::log(double(cfg.entropy_bins)) + 1e-12;
    }
    return {ok, "over " + std::to_string(inputs.size()) + " EEG-like inputs: H in [" + fmt(h_lo) +
                    ", " + fmt(h_hi) + "] (required (0, 1.2)), D in [" + fmt(d_lo) + ", " +
                    fmt(d_hi) + "] (required (0.8, 2.2)), max S = " + fmt(s_hi) + " <= ln(" +
                    std::to_string(cfg.entropy_bins) + ") = " +
                    fmt(std::log(double(cfg.entropy_bins)))};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"Koch dimension in [1.18, 1.34] at depth 6", 5.0, koch_dimension},
        {"F critical value, alpha 0.05, df (159,159)", 1.0, f_critical_anchor},
        {"Hurst white-noise anchor (20 seeds, n=4096)", 30.0, hurst_white_noise},
        {"Hurst oracle sweep H in {0.3, 0.7, 0.9} (20 seeds, n=2^14)", 120.0, hurst_oracle_sweep},
        {"Entropy exactness", 0.0, entropy_exactness},
        {"Statistics exactness (Pearson, f_cdf vs quadrature)", 0.0, statistics_exactness},
        {"Filter magnitude responses", 0.0, filter_responses},
        {"Pipeline determinism, layout and first/last H delta", 0.0, pipeline_determinism},
        {"Range sanity on EEG-like inputs (absolute published values are not reproducible)", 0.0,
         range_sanity},
    };

    std::printf("acceptance suite, nldtool %s\n", version);
    std::printf("note: absolute per-session S, H, D magnitudes are configuration-dependent\n"
                "(histogram bin count, window grid, signal embedding are free parameters),\n"
                "so published absolute values are not a reproducible target; the criteria\n"
                "below are the oracle-backed substitute.\n\n");

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = outcome.pass;
        std::string timing = " [" + fmt(elapsed) + " s";
        if (c.time_limit_s > 0.0) {
            timing += " < " + fmt(c.time_limit_s) + " s limit";
            pass = pass && elapsed < c.time_limit_s;
        }
        timing += "]";
        if (!pass) ++failures;
        std::printf("%s  %zu. %s: %s%s\n", pass ? "PASS" : "FAIL", i + 1, c.name.c_str(),
                    outcome.detail.c_str(), timing.c_str());
    }
    std::printf("\n%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
