#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "nld/preprocess.hpp"

namespace nld {

/// One recording to process: where it lives and its table-row identity.
struct ManifestEntry {
    std::filesystem::path file;
    int subject_id = 0;
    std::string session_label;
    double age = 0.0;
    double experience = 0.0;
    std::string channel;  // empty means the run-level default
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

/// Split one record on the detected delimiter; ' ' means any whitespace run.
inline std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    if (delim == ' ') {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
        return out;
    }
    std::string field;
    for (char ch : line) {
        if (ch == delim) {
            out.push_back(strip(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    out.push_back(strip(field));
    return out;
}

inline char detect_delimiter(const std::string& header) {
    if (header.find(',') != std::string::npos) return ',';
    if (header.find('\t') != std::string::npos) return '\t';
    if (header.find(';') != std::string::npos) return ';';
    return ' ';
}

inline double parse_double(const std::string& tok, const std::string& context) {
    const std::string t = strip(tok);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw std::runtime_error(context + ": cannot parse number '" + tok + "'");
    return v;
}

inline long parse_long(const std::string& tok, const std::string& context) {
    const std::string t = strip(tok);
    long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw std::runtime_error(context + ": cannot parse integer '" + tok + "'");
    return v;
}

} // namespace detail

/// Load a delimited-text recording: first row holds channel names, one
/// column per channel. The sample rate comes from the caller, not the file.
/// Lines starting with '#' are ignored.
inline ChannelFrame load_frame(const std::filesystem::path& path, double sample_rate) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open recording file: " + path.string());

    ChannelFrame frame;
    frame.sample_rate = sample_rate;

    std::string line;
    std::size_t line_no = 0;
    char delim = ',';
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        if (!have_header) {
            delim = detail::detect_delimiter(s);
            frame.channels = detail::split_fields(s, delim);
            if (frame.channels.empty())
                throw std::runtime_error(context + ": empty channel header");
            frame.columns.assign(frame.channels.size(), {});
            have_header = true;
            continue;
        }
        const std::vector<std::string> fields = detail::split_fields(s, delim);
        if (fields.size() != frame.channels.size())
            throw std::runtime_error(context + ": expected " +
                                     std::to_string(frame.channels.size()) + " columns, got " +
                                     std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c)
            frame.columns[c].push_back(detail::parse_double(fields[c], context));
    }
    if (!have_header)
        throw std::runtime_error(path.string() + ": no header row");
    if (frame.columns.front().empty())
        throw std::runtime_error(path.string() + ": no data rows");
    return frame;
}

/// Manifest CSV: header `file,subject,session,age,experience[,channel]`.
/// Relative recording paths resolve against the manifest's directory.
inline Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest: " + path.string());
    const std::filesystem::path base = path.parent_path();

    Manifest manifest;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    char delim = ',';
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        if (!have_header) {
            delim = detail::detect_delimiter(s);
            header = detail::split_fields(s, delim);
            const std::vector<std::string> expected = {"file", "subject", "session", "age",
                                                       "experience"};
            if (header.size() < expected.size())
                throw std::runtime_error(context + ": manifest header needs columns "
                                                   "file,subject,session,age,experience");
            for (std::size_t i = 0; i < expected.size(); ++i)
                if (header[i] != expected[i])
                    throw std::runtime_error(context + ": manifest column " +
                                             std::to_string(i + 1) + " must be '" + expected[i] +
                                             "', got '" + header[i] + "'");
            have_header = true;
            continue;
        }
        const std::vector<std::string> f = detail::split_fields(s, delim);
        if (f.size() < 5)
            throw std::runtime_error(context + ": manifest row needs at least 5 fields");
        ManifestEntry e;
        std::filesystem::path file = f[0];
        e.file = file.is_absolute() ? file : base / file;
        e.subject_id = static_cast<int>(detail::parse_long(f[1], context));
        e.session_label = f[2];
        e.age = detail::parse_double(f[3], context);
        e.experience = detail::parse_double(f[4], context);
        if (f.size() > 5) e.channel = f[5];
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

/// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
inline std::string fnv1a_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for digest: " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

/// Shortest round-trip decimal form (deterministic, locale-independent).
inline std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Fixed-point form with the given number of decimals.
inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

} // namespace nld
