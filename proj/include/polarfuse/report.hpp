#ifndef POLARFUSE_REPORT_HPP
#define POLARFUSE_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polarfuse/error.hpp"

namespace polarfuse {

/// Recognition rate as a percentage: 100 * correct / total.
inline double recognition_rate(std::size_t correct, std::size_t total) {
    if (total == 0) throw Error(ErrorCode::InvalidArgument, "recognition rate of an empty test set");
    return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

/// Two-decimal display, halves rounded away from zero.
inline std::string format_percent(double v) {
    const double hundredths = std::round(v * 100.0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
    return buf;
}

/// Exact two-decimal display of 100*correct/total using integer arithmetic.
inline std::string format_ratio_percent(std::size_t correct, std::size_t total) {
    if (total == 0) throw Error(ErrorCode::InvalidArgument, "recognition rate of an empty test set");
    const std::uint64_t c = correct;
    const std::uint64_t t = total;
    const std::uint64_t hundredths = (20000 * c + t) / (2 * t);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llu.%02llu", static_cast<unsigned long long>(hundredths / 100),
                  static_cast<unsigned long long>(hundredths % 100));
    return buf;
}

struct ReportRow {
    std::size_t test_case = 0;
    std::size_t total = 0;
    std::size_t per_class = 0;
    std::size_t correct = 0;
    double rate_percent = 0.0;
};

struct ExperimentReport {
    std::string title;
    std::vector<ReportRow> rows;
    double average_rate = 0.0;
    double max_rate = 0.0;
    std::vector<std::pair<std::string, std::string>> config;
};

/// Builds a report from per-test-case counts; rates are kept unrounded.
inline ExperimentReport make_report(std::vector<ReportRow> rows) {
    if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "report has no rows");
    ExperimentReport r;
    double sum = 0.0;
    r.max_rate = -1.0;
    for (auto& row : rows) {
        row.rate_percent = recognition_rate(row.correct, row.total);
        sum += row.rate_percent;
        r.max_rate = std::max(r.max_rate, row.rate_percent);
    }
    r.average_rate = sum / static_cast<double>(rows.size());
    r.rows = std::move(rows);
    return r;
}

inline std::string report_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << "test_case,total,per_class,correct,rate_percent\n";
    for (const auto& row : r.rows) {
        out << row.test_case << ',' << row.total << ',' << row.per_class << ',' << row.correct << ','
            << format_ratio_percent(row.correct, row.total) << '\n';
    }
    out << "#average," << format_percent(r.average_rate) << '\n';
    out << "#max," << format_percent(r.max_rate) << '\n';
    return out.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

inline void print_report_table(std::ostream& os, const ExperimentReport& r) {
    if (!r.title.empty()) os << r.title << '\n';
    for (const auto& [key, value] : r.config) os << "  " << key << " = " << value << '\n';
    char line[128];
    std::snprintf(line, sizeof line, "%9s %8s %10s %8s %8s\n", "test case", "total", "per class",
                  "correct", "rate %");
    os << line;
    for (const auto& row : r.rows) {
        std::snprintf(line, sizeof line, "%9zu %8zu %10zu %8zu %8s\n", row.test_case, row.total,
                      row.per_class, row.correct,
                      format_ratio_percent(row.correct, row.total).c_str());
        os << line;
    }
    os << "average " << format_percent(r.average_rate) << "%, max " << format_percent(r.max_rate)
       << "%\n";
}

}  // namespace polarfuse

#endif
