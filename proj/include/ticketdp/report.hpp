#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ticketdp/metrics.hpp"

namespace ticketdp {

inline constexpr const char* kGlobalSummaryFile = "global_summary.csv";
inline constexpr const char* kErrorRankingFile = "error_type_ranking.csv";
inline constexpr const char* kBreakdownsFile = "breakdowns.csv";
inline constexpr const char* kHeatmapFile = "environment_heatmap.csv";
inline constexpr const char* kSanityFile = "oracle_sanity.csv";
inline constexpr const char* kSummaryJsonFile = "summary.json";
inline constexpr const char* kReportMarkdownFile = "report.md";

struct ReportOptions {
    std::vector<GroupKey> group_by{GroupKey::Scenario, GroupKey::EtaLevel,
                                   GroupKey::DeadlineRegime, GroupKey::InventoryLevel};
    double confidence = 0.95;
    /// Results directory whose config/manifest snapshots are copied along.
    std::filesystem::path snapshot_source;
};

/// Writes the five CSV data files, summary.json and a human-readable
/// report.md. Output depends only on `results` and `options`.
void emit_report(const ResultsStore& results, const std::filesystem::path& out_dir,
                 const ReportOptions& options = {});

}  // namespace ticketdp
