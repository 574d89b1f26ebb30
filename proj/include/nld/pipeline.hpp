#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nld/entropy.hpp"
#include "nld/fractal.hpp"
#include "nld/hurst.hpp"
#include "nld/io.hpp"
#include "nld/preprocess.hpp"
#include "nld/stats.hpp"
#include "nld/version.hpp"

namespace nld {

/// Everything a batch run needs beyond the manifest.
struct RunConfig {
    double sample_rate = 300.0;  // Hz
    std::string channel = "F4";  // default electrode when the manifest is silent
    FilterSpec filter;
    HurstConfig hurst;
    int fd_depth = 8;               // dyadic box-count grid r = 2^-k, k = 1..fd_depth
    std::size_t entropy_bins = 128;
    double entropy_c = 1.0;
    double alpha = 0.05;
    std::filesystem::path out_dir;
    bool emit_svg = false;
};

struct EntryError {
    ManifestEntry entry;
    std::string message;
};

struct PipelineResult {
    FeatureTable table;
    std::vector<EntryError> errors;
};

/// Fixed session sequence: DAY A-D, FOG A-D, NIGHT A-D, RAIN A-D. Canonical
/// labels sort by that index; free-form labels sort after them, lexically.
inline std::pair<int, std::string> session_sort_key(const std::string& label) {
    if (is_canonical_session_label(label)) {
        static const std::vector<std::string> envs = {"DAY", "FOG", "NIGHT", "RAIN"};
        for (std::size_t e = 0; e < envs.size(); ++e) {
            if (label.rfind(envs[e] + "_", 0) == 0)
                return {static_cast<int>(e) * 4 + (label.back() - 'A'), ""};
        }
    }
    return {1000, label};
}

inline void sort_feature_table(FeatureTable& t) {
    std::sort(t.rows.begin(), t.rows.end(), [](const FeatureRow& a, const FeatureRow& b) {
        if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
        return session_sort_key(a.session_label) < session_sort_key(b.session_label);
    });
}

/// Preprocess one series with the configured chain and extract its markers.
inline FeatureRow extract_features(const SampledSeries& raw, const RunConfig& cfg) {
    validate_filter_spec(cfg.filter, raw.sample_rate());
    const SampledSeries conditioned = notch(highpass(detrend_linear(raw), cfg.filter), cfg.filter);
    FeatureRow row;
    row.s = signal_entropy(conditioned, cfg.entropy_bins, cfg.entropy_c).s;
    row.h = hurst_exponent(conditioned, cfg.hurst).h;
    row.d = fractal_dimension(embed_signal(conditioned), cfg.fd_depth).d;
    return row;
}

/// Run the whole manifest. Per-entry failures are collected, not fatal: the
/// remaining entries still process and the table still comes back sorted in
/// canonical order.
inline PipelineResult run_pipeline(const Manifest& manifest, const RunConfig& cfg) {
    std::set<std::pair<int, std::string>> identities;
    for (const ManifestEntry& e : manifest.entries) {
        if (!identities.emplace(e.subject_id, e.session_label).second)
            throw std::invalid_argument("manifest: duplicate (subject " +
                                        std::to_string(e.subject_id) + ", " + e.session_label +
                                        ")");
    }
    PipelineResult result;
    for (const ManifestEntry& entry : manifest.entries) {
        try {
            const ChannelFrame frame = load_frame(entry.file, cfg.sample_rate);
            const std::string channel = entry.channel.empty() ? cfg.channel : entry.channel;
            const SampledSeries raw = select_channel(frame, channel);
            FeatureRow row = extract_features(raw, cfg);
            row.subject_id = entry.subject_id;
            row.session_label = entry.session_label;
            row.age = entry.age;
            row.experience = entry.experience;
            result.table.rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            result.errors.push_back({entry, e.what()});
        }
    }
    if (!result.table.rows.empty()) validate_feature_table(result.table);
    sort_feature_table(result.table);
    return result;
}

/// Per-subject change in H between the first and last session in canonical
/// order. Single-session subjects are flagged and carry no delta.
struct FirstLastDelta {
    int subject_id = 0;
    double h_first = 0.0;
    double h_last = 0.0;
    std::optional<double> delta;
};

inline std::vector<FirstLastDelta> first_last_delta(const FeatureTable& table) {
    FeatureTable sorted = table;
    sort_feature_table(sorted);
    std::map<int, std::vector<const FeatureRow*>> by_subject;
    for (const FeatureRow& r : sorted.rows) by_subject[r.subject_id].push_back(&r);

    std::vector<FirstLastDelta> out;
    out.reserve(by_subject.size());
    for (const auto& [subject, rows] : by_subject) {
        FirstLastDelta d;
        d.subject_id = subject;
        d.h_first = rows.front()->h;
        d.h_last = rows.back()->h;
        if (rows.size() >= 2) d.delta = d.h_last - d.h_first;
        out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// report emission
// ---------------------------------------------------------------------------

/// Provenance block written atop every output file: parameters, tool
/// version, input digests. Deliberately timestamp-free so reruns are
/// byte-identical.
struct Provenance {
    std::string command;
    std::vector<std::string> extra;  // pre-formatted "key = value" lines
};

namespace detail {

inline void write_provenance(std::ostream& os, const Provenance& p) {
    os << "# nldtool " << version << "\n";
    if (!p.command.empty()) os << "# command = " << p.command << "\n";
    for (const std::string& line : p.extra) os << "# " << line << "\n";
}

inline std::vector<std::string> config_lines(const RunConfig& cfg) {
    std::vector<std::string> lines;
    lines.push_back("sample_rate = " + format_full(cfg.sample_rate));
    lines.push_back("channel = " + cfg.channel);
    lines.push_back("highpass_cutoff = " + format_full(cfg.filter.highpass_cutoff));
    lines.push_back("notch_freq = " + format_full(cfg.filter.notch_freq));
    lines.push_back("notch_q = " + format_full(cfg.filter.notch_q));
    lines.push_back("filter_order = " + std::to_string(cfg.filter.filter_order));
    lines.push_back(std::string("zero_phase = ") + (cfg.filter.zero_phase ? "true" : "false"));
    lines.push_back("hurst_w_min = " + std::to_string(cfg.hurst.w_min));
    lines.push_back("hurst_w_max_fraction = " + format_full(cfg.hurst.w_max_fraction));
    lines.push_back("hurst_n_windows = " + std::to_string(cfg.hurst.n_windows));
    lines.push_back("fd_depth = " + std::to_string(cfg.fd_depth));
    lines.push_back("entropy_bins = " + std::to_string(cfg.entropy_bins));
    lines.push_back("entropy_c = " + format_full(cfg.entropy_c));
    lines.push_back("alpha = " + format_full(cfg.alpha));
    return lines;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);  // binary: no platform newline translation
    if (!os)
        throw std::runtime_error("cannot write output file: " + path.string());
    return os;
}

} // namespace detail

/// features.csv (2-decimal display precision) and features_full.csv (full
/// precision), identical layout: Subject, Session, S, H, D, Age, Driving
/// Experience.
inline void write_feature_tables(const FeatureTable& table, const std::filesystem::path& out_dir,
                                 const Provenance& prov) {
    const char* header = "Subject,Session,S,H,D,Age,Driving Experience\n";
    {
        auto os = detail::open_output(out_dir / "features.csv");
        detail::write_provenance(os, prov);
        os << header;
        for (const FeatureRow& r : table.rows) {
            os << r.subject_id << ',' << r.session_label << ',' << format_fixed(r.s, 2) << ','
               << format_fixed(r.h, 2) << ',' << format_fixed(r.d, 2) << ',' << format_full(r.age)
               << ',' << format_full(r.experience) << "\n";
        }
    }
    {
        auto os = detail::open_output(out_dir / "features_full.csv");
        detail::write_provenance(os, prov);
        os << header;
        for (const FeatureRow& r : table.rows) {
            os << r.subject_id << ',' << r.session_label << ',' << format_full(r.s) << ','
               << format_full(r.h) << ',' << format_full(r.d) << ',' << format_full(r.age) << ','
               << format_full(r.experience) << "\n";
        }
    }
}

inline void write_errors_report(const std::vector<EntryError>& errors,
                                const std::filesystem::path& out_dir, const Provenance& prov) {
    auto os = detail::open_output(out_dir / "errors.txt");
    detail::write_provenance(os, prov);
    os << "# failed entries: " << errors.size() << "\n";
    for (const EntryError& e : errors) {
        os << e.entry.file.string() << " (subject " << e.entry.subject_id << ", "
           << e.entry.session_label << "): " << e.message << "\n";
    }
}

namespace detail {

inline void write_svg_trajectory(const std::filesystem::path& path, const std::string& feature,
                                 const std::map<int, std::vector<double>>& by_subject) {
    constexpr double width = 960.0, height = 360.0;
    constexpr double ml = 60.0, mr = 20.0, mt = 30.0, mb = 40.0;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    std::size_t max_sessions = 1;
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& [subject, values] : by_subject) {
        max_sessions = std::max(max_sessions, values.size());
        for (double v : values) {
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    auto sx = [&](double session_index) {
        return max_sessions == 1
                   ? ml + plot_w / 2.0
                   : ml + plot_w * (session_index - 1.0) / (static_cast<double>(max_sessions) - 1.0);
    };
    auto sy = [&](double v) { return mt + plot_h * (1.0 - (v - lo) / (hi - lo)); };

    auto os = open_output(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
       << feature << " per session</text>\n";
    // one vertical gridline per session boundary
    for (std::size_t k = 1; k <= max_sessions; ++k) {
        os << "<line x1=\"" << format_fixed(sx(double(k)), 2) << "\" y1=\"" << mt << "\" x2=\""
           << format_fixed(sx(double(k)), 2) << "\" y2=\"" << mt + plot_h
           << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w << "\" height=\""
       << plot_h << "\" fill=\"none\" stroke=\"#000000\"/>\n";

    std::size_t idx = 0;
    for (const auto& [subject, values] : by_subject) {
        const int hue = static_cast<int>((idx * 360) / std::max<std::size_t>(by_subject.size(), 1));
        os << "<polyline fill=\"none\" stroke=\"hsl(" << hue
           << ",70%,45%)\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (k) os << ' ';
            os << format_fixed(sx(double(k + 1)), 2) << ',' << format_fixed(sy(values[k]), 2);
        }
        os << "\"><title>subject " << subject << "</title></polyline>\n";
        ++idx;
    }
    os << "<text x=\"8\" y=\"" << mt + plot_h / 2.0
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << feature << "</text>\n";
    os << "<text x=\"" << ml + plot_w / 2.0 << "\" y=\"" << height - 10.0
       << "\" font-family=\"sans-serif\" font-size=\"12\">session</text>\n";
    os << "</svg>\n";
}

} // namespace detail

/// trajectories_{S,H,D}.csv: per-subject per-session feature values with the
/// session index (1..k) in canonical order; optional SVG line charts.
inline void emit_trajectories(const FeatureTable& table, const std::filesystem::path& out_dir,
                              const Provenance& prov, bool emit_svg = false) {
    if (table.rows.empty())
        throw std::invalid_argument("emit_trajectories: empty feature table");
    FeatureTable sorted = table;
    sort_feature_table(sorted);

    const std::vector<std::pair<std::string, double FeatureRow::*>> features = {
        {"S", &FeatureRow::s}, {"H", &FeatureRow::h}, {"D", &FeatureRow::d}};
    for (const auto& [name, member] : features) {
        std::map<int, std::vector<double>> by_subject;
        for (const FeatureRow& r : sorted.rows) by_subject[r.subject_id].push_back(r.*member);

        auto os = detail::open_output(out_dir / ("trajectories_" + name + ".csv"));
        detail::write_provenance(os, prov);
        os << "subject_id,session_index,value\n";
        for (const auto& [subject, values] : by_subject) {
            for (std::size_t k = 0; k < values.size(); ++k)
                os << subject << ',' << (k + 1) << ',' << format_full(values[k]) << "\n";
        }
        if (emit_svg)
            detail::write_svg_trajectory(out_dir / ("trajectories_" + name + ".svg"), name,
                                         by_subject);
    }
}

/// correlation.csv in the fixed variable order (H, D, S, Experience, Age).
inline void write_correlation_report(const CorrelationMatrix& m,
                                     const std::filesystem::path& out_dir,
                                     const Provenance& prov) {
    auto os = detail::open_output(out_dir / "correlation.csv");
    detail::write_provenance(os, prov);
    for (const std::string& label : m.labels) os << ',' << label;
    os << "\n";
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        os << m.labels[i];
        for (std::size_t j = 0; j < m.labels.size(); ++j) os << ',' << format_full(m.values[i][j]);
        os << "\n";
    }
}

/// ftest.txt: one spreadsheet-style report block per column pair.
inline void write_ftest_report(const std::vector<std::pair<std::string, std::string>>& pairs,
                               const std::vector<FTestReport>& reports,
                               const std::filesystem::path& out_dir, const Provenance& prov) {
    if (pairs.size() != reports.size())
        throw std::invalid_argument("write_ftest_report: pair/report count mismatch");
    auto os = detail::open_output(out_dir / "ftest.txt");
    detail::write_provenance(os, prov);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [na, nb] = pairs[i];
        const FTestReport& r = reports[i];
        os << "F-Test Two-Sample for Variances: " << na << " vs " << nb << "\n";
        os << "                      " << na << "\t" << nb << "\n";
        os << "Mean                  " << format_full(r.mean_a) << "\t" << format_full(r.mean_b)
           << "\n";
        os << "Variance              " << format_full(r.var_a) << "\t" << format_full(r.var_b)
           << "\n";
        os << "Observations          " << (r.df_a + 1) << "\t" << (r.df_b + 1) << "\n";
        os << "df                    " << r.df_a << "\t" << r.df_b << "\n";
        os << "F                     " << format_full(r.f) << "\n";
        os << "P(F<=f) one-tail      " << format_full(r.p_one_tail) << "\n";
        os << "F Critical one-tail   " << format_full(r.f_crit) << "\n";
        os << "\n";
    }
}

/// first_last_delta.csv: per-subject H change between first and last session.
inline void write_first_last_report(const std::vector<FirstLastDelta>& deltas,
                                    const std::filesystem::path& out_dir,
                                    const Provenance& prov) {
    auto os = detail::open_output(out_dir / "first_last_delta.csv");
    detail::write_provenance(os, prov);
    os << "subject_id,h_first,h_last,delta,note\n";
    for (const FirstLastDelta& d : deltas) {
        os << d.subject_id << ',' << format_full(d.h_first) << ',' << format_full(d.h_last) << ',';
        if (d.delta)
            os << format_full(*d.delta) << ',';
        else
            os << ",single-session";
        os << "\n";
    }
}

/// Parse a features CSV (either precision variant) back into a table.
inline FeatureTable load_feature_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open features file: " + path.string());
    FeatureTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        const std::vector<std::string> f = detail::split_fields(s, ',');
        if (!have_header) {
            if (f.size() != 7 || f[0] != "Subject")
                throw std::runtime_error(context + ": not a features table header");
            have_header = true;
            continue;
        }
        if (f.size() != 7)
            throw std::runtime_error(context + ": expected 7 columns");
        FeatureRow r;
        r.subject_id = static_cast<int>(detail::parse_long(f[0], context));
        r.session_label = f[1];
        r.s = detail::parse_double(f[2], context);
        r.h = detail::parse_double(f[3], context);
        r.d = detail::parse_double(f[4], context);
        r.age = detail::parse_double(f[5], context);
        r.experience = detail::parse_double(f[6], context);
        table.rows.push_back(std::move(r));
    }
    if (!have_header)
        throw std::runtime_error(path.string() + ": no header row");
    return table;
}

/// Write a single series as a one-column recording file (round-trips through
/// load_frame / select_channel).
inline void write_series_file(const std::filesystem::path& path, const SampledSeries& x,
                              const std::string& channel) {
    auto os = detail::open_output(path);
    os << channel << "\n";
    for (double v : x.samples()) os << format_full(v) << "\n";
}

} // namespace nld
