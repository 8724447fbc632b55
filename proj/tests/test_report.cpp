#include <gtest/gtest.h>

#include <sstream>

#include "polarfuse/report.hpp"

using namespace polarfuse;

namespace {

ExperimentReport from_counts(const std::vector<std::pair<std::size_t, std::size_t>>& counts, std::size_t per_class_step) {
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        rows.push_back({i + 1, counts[i].second, per_class_step * (i + 1), counts[i].first, 0.0});
    }
    return make_report(rows);
}

}  // namespace

TEST(Report, RateFormula) {
    EXPECT_DOUBLE_EQ(recognition_rate(80, 84), 100.0 * 80 / 84);
    EXPECT_EQ(format_ratio_percent(80, 84), "95.24");
    EXPECT_THROW(recognition_rate(1, 0), Error);
}

TEST(Report, HalfAwayFromZeroDisplay) {
    EXPECT_EQ(format_ratio_percent(1, 32), "3.13");  // 3.125 exactly
    EXPECT_EQ(format_ratio_percent(1, 8), "12.50");
    EXPECT_EQ(format_ratio_percent(93, 98), "94.90");
    EXPECT_EQ(format_ratio_percent(0, 5), "0.00");
    EXPECT_EQ(format_ratio_percent(5, 5), "100.00");
    EXPECT_EQ(format_percent(3.125), "3.13");
    EXPECT_EQ(format_percent(93.8095238), "93.81");
}

TEST(Report, IncrementalReferenceRows) {
    const std::vector<std::pair<std::size_t, std::size_t>> counts{
        {13, 14}, {25, 28}, {38, 42}, {51, 56}, {65, 70}, {80, 84},
        {93, 98}, {105, 112}, {118, 126}, {132, 140}, {142, 154}};
    const std::vector<std::string> printed{"92.86", "89.29", "90.48", "91.07", "92.86", "95.24",
                                           "94.90", "93.75", "93.65", "94.29", "92.21"};
    const auto r = from_counts(counts, 1);
    for (std::size_t i = 0; i < printed.size(); ++i) {
        EXPECT_EQ(format_ratio_percent(r.rows[i].correct, r.rows[i].total), printed[i]);
    }
    EXPECT_EQ(format_percent(r.max_rate), "95.24");
}

TEST(Report, KFoldReferenceRows) {
    const auto r = from_counts({{67, 70}, {67, 70}, {63, 70}}, 0);
    EXPECT_EQ(format_ratio_percent(67, 70), "95.71");
    EXPECT_EQ(format_ratio_percent(63, 70), "90.00");
    EXPECT_EQ(format_percent(r.average_rate), "93.81");
    EXPECT_EQ(format_percent(r.max_rate), "95.71");
}

TEST(Report, RowAndAverageInvariants) {
    const auto r = from_counts({{3, 7}, {11, 13}, {1, 1}, {0, 9}}, 1);
    double sum = 0.0;
    for (const auto& row : r.rows) {
        EXPECT_NEAR(row.rate_percent, 100.0 * row.correct / row.total, 0.005);
        sum += row.rate_percent;
    }
    EXPECT_NEAR(r.average_rate, sum / 4.0, 0.005);
    EXPECT_EQ(r.max_rate, 100.0);
}

TEST(Report, CsvLayout) {
    const auto r = from_counts({{67, 70}, {67, 70}, {63, 70}}, 0);
    EXPECT_EQ(report_csv(r),
              "test_case,total,per_class,correct,rate_percent\n"
              "1,70,0,67,95.71\n"
              "2,70,0,67,95.71\n"
              "3,70,0,63,90.00\n"
              "#average,93.81\n"
              "#max,95.71\n");
}

TEST(Report, TableMirrorMentionsEveryRow) {
    auto r = from_counts({{1, 2}, {2, 2}}, 1);
    r.title = "demo";
    std::ostringstream os;
    print_report_table(os, r);
    const std::string s = os.str();
    EXPECT_NE(s.find("demo"), std::string::npos);
    EXPECT_NE(s.find("50.00"), std::string::npos);
    EXPECT_NE(s.find("average 75.00%"), std::string::npos);
}

TEST(Report, EmptyRejected) {
    EXPECT_THROW(make_report({}), Error);
}
