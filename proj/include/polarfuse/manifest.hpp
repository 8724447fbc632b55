#ifndef POLARFUSE_MANIFEST_HPP
#define POLARFUSE_MANIFEST_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polarfuse/error.hpp"
#include "polarfuse/pgm.hpp"

namespace polarfuse {

inline constexpr std::string_view kManifestMagic = "#polarfuse-manifest v1";

struct ManifestRecord {
    std::string subject_id;
    std::string sample_id;
    std::filesystem::path visual_path;   // resolved against the manifest directory
    std::filesystem::path thermal_path;
};

struct DatasetManifest {
    std::vector<ManifestRecord> records;

    /// Distinct subject ids in sorted order; position = class index.
    std::vector<std::string> subjects() const {
        std::set<std::string> s;
        for (const auto& r : records) s.insert(r.subject_id);
        return {s.begin(), s.end()};
    }
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

}  // namespace detail

/// Parses manifest text. Paths are resolved against `base_dir`; image files
/// are not touched.
inline DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    DatasetManifest m;
    std::set<std::pair<std::string, std::string>> seen;

    auto fail = [&](ErrorCode code, const std::string& msg) {
        throw Error(code, "line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != kManifestMagic) fail(ErrorCode::ParseError, "missing '#polarfuse-manifest v1' header");
            continue;
        }
        if (line.empty() || line.front() == '#') continue;
        const auto f = detail::split_tabs(line);
        if (f.size() != 4) {
            fail(ErrorCode::ParseError, "expected 4 tab-separated fields, found " + std::to_string(f.size()));
        }
        for (const auto& field : f) {
            if (field.empty()) fail(ErrorCode::ParseError, "empty field");
        }
        if (!seen.emplace(f[0], f[1]).second) {
            fail(ErrorCode::DuplicateSample, "duplicate sample (" + f[0] + ", " + f[1] + ")");
        }
        m.records.push_back({f[0], f[1], base_dir / f[2], base_dir / f[3]});
    }
    if (line_no == 0) throw Error(ErrorCode::ParseError, "line 1: empty manifest");
    return m;
}

/// Checks that both images of every record exist and agree in size
/// (headers only).
inline void validate_manifest_files(const DatasetManifest& m) {
    for (const auto& r : m.records) {
        for (const auto* p : {&r.visual_path, &r.thermal_path}) {
            if (!std::filesystem::is_regular_file(*p)) {
                throw Error(ErrorCode::MissingFile, p->string());
            }
        }
        const PgmHeader v = read_pgm_header(r.visual_path);
        const PgmHeader t = read_pgm_header(r.thermal_path);
        if (v.width != t.width || v.height != t.height) {
            throw Error(ErrorCode::PairDimensionMismatch,
                        "(" + r.subject_id + ", " + r.sample_id + "): visual " + std::to_string(v.width) +
                            "x" + std::to_string(v.height) + ", thermal " + std::to_string(t.width) +
                            "x" + std::to_string(t.height));
        }
    }
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, "cannot open manifest " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    DatasetManifest m = parse_manifest(buf.str(), path.parent_path());
    validate_manifest_files(m);
    return m;
}

/// Writes records with paths made relative to the manifest's directory.
inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    const auto base = path.parent_path();
    auto rel = [&](const std::filesystem::path& p) {
        return (base.empty() ? p : p.lexically_relative(base)).generic_string();
    };
    std::ostringstream out;
    out << kManifestMagic << '\n';
    for (const auto& r : m.records) {
        out << r.subject_id << '\t' << r.sample_id << '\t'
            << rel(r.visual_path) << '\t' << rel(r.thermal_path) << '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    f << out.str();
    if (!f) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace polarfuse

#endif
