// nldtool: batch extraction of nonlinear-dynamics markers (Shannon entropy,
// Hurst exponent, box-counting fractal dimension) from sampled recordings,
// plus the statistical post-analysis and synthetic fixture generators.

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "nld/nld.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    double fs = 300.0;
    std::string channel = "F4";
    double highpass = 1.0;
    double notch = 50.0;
    double notch_q = 30.0;
    int filter_order = 4;
    bool no_zero_phase = false;
};

void add_filter_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--fs", f.fs, "sampling rate in Hz")->capture_default_str();
    cmd->add_option("--channel", f.channel, "channel to analyse")->capture_default_str();
    cmd->add_option("--highpass", f.highpass, "high-pass cutoff in Hz")->capture_default_str();
    cmd->add_option("--notch", f.notch, "notch center frequency in Hz")->capture_default_str();
    cmd->add_option("--notch-q", f.notch_q, "notch quality factor")->capture_default_str();
    cmd->add_option("--filter-order", f.filter_order, "Butterworth order (even)")
        ->capture_default_str();
    cmd->add_flag("--no-zero-phase", f.no_zero_phase, "single-pass (causal) filtering");
}

nld::FilterSpec to_filter_spec(const CommonFlags& f) {
    nld::FilterSpec spec;
    spec.highpass_cutoff = f.highpass;
    spec.notch_freq = f.notch;
    spec.notch_q = f.notch_q;
    spec.filter_order = f.filter_order;
    spec.zero_phase = !f.no_zero_phase;
    return spec;
}

int run_extract(const std::string& manifest_path, const std::string& out_dir,
                const nld::RunConfig& cfg_in) {
    nld::RunConfig cfg = cfg_in;
    cfg.out_dir = out_dir;
    fs::create_directories(cfg.out_dir);

    const nld::Manifest manifest = nld::load_manifest(manifest_path);

    nld::Provenance prov;
    prov.command = "extract";
    prov.extra = nld::detail::config_lines(cfg);
    prov.extra.push_back("manifest = " + manifest_path);
    for (const nld::ManifestEntry& e : manifest.entries) {
        std::string digest = "unreadable";
        try {
            digest = nld::fnv1a_digest(e.file);
        } catch (const std::exception&) {
        }
        prov.extra.push_back("input " + e.file.string() + " fnv1a=" + digest);
    }

    if (manifest.entries.empty()) {
        std::cerr << "warning: manifest has no entries; writing empty outputs\n";
        nld::write_feature_tables(nld::FeatureTable{}, cfg.out_dir, prov);
        nld::write_errors_report({}, cfg.out_dir, prov);
        return 0;
    }

    const nld::PipelineResult result = nld::run_pipeline(manifest, cfg);
    nld::write_feature_tables(result.table, cfg.out_dir, prov);
    nld::write_errors_report(result.errors, cfg.out_dir, prov);
    if (!result.table.rows.empty())
        nld::emit_trajectories(result.table, cfg.out_dir, prov, cfg.emit_svg);

    for (const nld::EntryError& e : result.errors)
        std::cerr << "error: " << e.entry.file.string() << ": " << e.message << "\n";
    std::cout << "extracted " << result.table.rows.size() << " of " << manifest.entries.size()
              << " entries -> " << cfg.out_dir.string() << "\n";
    return result.errors.empty() ? 0 : 1;
}

int run_stats(const std::string& features_path, const std::string& out_dir, double alpha,
              const std::vector<std::string>& ftest_cols) {
    const fs::path out = out_dir;
    fs::create_directories(out);

    const nld::FeatureTable table = nld::load_feature_table(features_path);
    nld::validate_feature_table(table);

    nld::Provenance prov;
    prov.command = "stats";
    prov.extra.push_back("features = " + features_path);
    prov.extra.push_back("features fnv1a=" + nld::fnv1a_digest(features_path));
    prov.extra.push_back("alpha = " + nld::format_full(alpha));

    nld::write_correlation_report(nld::pearson_matrix(table), out, prov);

    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<nld::FTestReport> reports;
    for (std::size_t i = 0; i < ftest_cols.size(); ++i) {
        for (std::size_t j = i + 1; j < ftest_cols.size(); ++j) {
            const std::vector<double> a = nld::feature_column(table, ftest_cols[i]);
            const std::vector<double> b = nld::feature_column(table, ftest_cols[j]);
            pairs.emplace_back(ftest_cols[i], ftest_cols[j]);
            reports.push_back(nld::f_test_two_sample(a, b, alpha));
        }
    }
    nld::write_ftest_report(pairs, reports, out, prov);
    nld::write_first_last_report(nld::first_last_delta(table), out, prov);

    std::cout << "stats written for " << table.rows.size() << " rows -> " << out.string() << "\n";
    return 0;
}

int run_synth(const std::string& kind, const std::string& out_path, double h, std::size_t n,
              std::uint64_t seed, int depth, double fs, const std::string& channel) {
    if (kind == "fgn") {
        const nld::SampledSeries x = nld::gen_fgn({h, n, seed}, fs);
        nld::write_series_file(out_path, x, channel);
    } else if (kind == "white") {
        const nld::SampledSeries x = nld::gen_white(n, seed, fs);
        nld::write_series_file(out_path, x, channel);
    } else if (kind == "koch") {
        const nld::PlanarCurve curve = nld::gen_koch({depth});
        auto os = nld::detail::open_output(out_path);
        os << "x,y\n";
        for (const auto& p : curve.points())
            os << nld::format_full(p[0]) << ',' << nld::format_full(p[1]) << "\n";
    } else {
        std::cerr << "unknown synth kind '" << kind << "' (expected fgn|white|koch)\n";
        return 2;
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_filter(const std::string& input, const std::string& out_path, const CommonFlags& flags) {
    const nld::ChannelFrame frame = nld::load_frame(input, flags.fs);
    const nld::SampledSeries raw = nld::select_channel(frame, flags.channel);
    const nld::FilterSpec spec = to_filter_spec(flags);
    nld::validate_filter_spec(spec, raw.sample_rate());
    const nld::SampledSeries y = nld::notch(nld::highpass(nld::detrend_linear(raw), spec), spec);
    nld::write_series_file(out_path, y, flags.channel);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear-dynamics markers for sampled signals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("nldtool ") + nld::version);

    // extract
    auto* extract = app.add_subcommand("extract", "manifest -> features + trajectories");
    std::string manifest_path, out_dir = "out";
    CommonFlags ex_flags;
    nld::RunConfig cfg;
    extract->add_option("--manifest", manifest_path, "manifest CSV")->required();
    extract->add_option("--out", out_dir, "output directory")->capture_default_str();
    add_filter_flags(extract, ex_flags);
    extract->add_option("--hurst-wmin", cfg.hurst.w_min, "smallest R/S window")
        ->capture_default_str();
    extract
        ->add_option("--hurst-wmax-frac", cfg.hurst.w_max_fraction,
                     "largest R/S window as a fraction of length")
        ->capture_default_str();
    extract->add_option("--hurst-windows", cfg.hurst.n_windows, "number of R/S window sizes")
        ->capture_default_str();
    extract->add_option("--fd-depth", cfg.fd_depth, "box-count grid depth (r = 2^-k, k=1..depth)")
        ->capture_default_str();
    extract->add_option("--entropy-bins", cfg.entropy_bins, "amplitude histogram bins")
        ->capture_default_str();
    extract->add_option("--entropy-c", cfg.entropy_c, "entropy measuring-unit constant")
        ->capture_default_str();
    extract->add_option("--alpha", cfg.alpha, "significance level")->capture_default_str();
    extract->add_flag("--svg", cfg.emit_svg, "also write SVG trajectory charts");

    // stats
    auto* stats = app.add_subcommand("stats", "features -> correlation + F-tests + H deltas");
    std::string features_path, stats_out = "out";
    double alpha = 0.05;
    std::vector<std::string> ftest_cols = {"S", "H", "D"};
    stats->add_option("--features", features_path, "features CSV (full precision preferred)")
        ->required();
    stats->add_option("--out", stats_out, "output directory")->capture_default_str();
    stats->add_option("--alpha", alpha, "significance level")->capture_default_str();
    stats->add_option("--ftest-cols", ftest_cols, "columns for pairwise F-tests")
        ->delimiter(',')
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "emit synthetic oracle fixtures");
    std::string kind, synth_out = "synth.csv", synth_channel = "F4";
    double h_true = 0.7, synth_fs = 300.0;
    std::size_t n = 4096;
    std::uint64_t seed = 1;
    int depth = 5;
    synth->add_option("kind", kind, "fgn | white | koch")->required();
    synth->add_option("--out", synth_out, "output file")->capture_default_str();
    synth->add_option("--hurst", h_true, "target Hurst exponent (fgn)")->capture_default_str();
    synth->add_option("--n", n, "sample count (fgn: power of two)")->capture_default_str();
    synth->add_option("--seed", seed, "random seed")->capture_default_str();
    synth->add_option("--depth", depth, "Koch recursion depth")->capture_default_str();
    synth->add_option("--fs", synth_fs, "sample rate recorded in series outputs")
        ->capture_default_str();
    synth->add_option("--channel", synth_channel, "column name for series outputs")
        ->capture_default_str();

    // filter
    auto* filter = app.add_subcommand("filter", "preprocess one recording (debug aid)");
    std::string filter_in, filter_out = "filtered.csv";
    CommonFlags fl_flags;
    filter->add_option("--input", filter_in, "recording file")->required();
    filter->add_option("--out", filter_out, "output file")->capture_default_str();
    add_filter_flags(filter, fl_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) {
            cfg.sample_rate = ex_flags.fs;
            cfg.channel = ex_flags.channel;
            cfg.filter = to_filter_spec(ex_flags);
            return run_extract(manifest_path, out_dir, cfg);
        }
        if (stats->parsed()) return run_stats(features_path, stats_out, alpha, ftest_cols);
        if (synth->parsed())
            return run_synth(kind, synth_out, h_true, n, seed, depth, synth_fs, synth_channel);
        if (filter->parsed()) return run_filter(filter_in, filter_out, fl_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
