#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ticketdp/experiment.hpp"

namespace ticketdp {

/// (sum oracle - sum misspec) / sum oracle over runs paired by index.
/// Negative when the misspecified policy did better in sample.
double rom_relative_loss(std::span<const double> oracle, std::span<const double> misspec);

/// Linear interpolation between closest order statistics:
/// position h = (n - 1) p on the sorted values.
double percentile(std::vector<double> values, double p);

/// One non-oracle case paired with the oracle of its scenario x environment.
struct PairedCase {
    std::string scenario_id;
    std::string label;
    std::string error_type;
    std::string env_id;
    double eta = 0.0;
    DeadlineKind regime = DeadlineKind::Flat;
    int inventory = 0;
    bool distinct_from_oracle = false;
    std::size_t runs = 0;
    double oracle_sum = 0.0;
    double misspec_sum = 0.0;

    double oracle_mean() const { return oracle_sum / static_cast<double>(runs); }
    double misspec_mean() const { return misspec_sum / static_cast<double>(runs); }
    double abs_loss() const { return oracle_mean() - misspec_mean(); }
    double rom_loss() const { return (oracle_sum - misspec_sum) / oracle_sum; }
};

/// Throws when a non-oracle case has no oracle in its cell or the run
/// counts differ.
std::vector<PairedCase> pair_cases(const ResultsStore& results);

struct AbsoluteLossStats {
    double mean = 0.0;
    double median = 0.0;
    double p90 = 0.0;
};

AbsoluteLossStats absolute_loss_stats(std::span<const PairedCase> cases);

struct LossSummary {
    std::size_t case_count = 0;
    double mean_oracle_revenue = 0.0;
    double mean_misspec_revenue = 0.0;
    double mean_abs_loss = 0.0;
    double median_abs_loss = 0.0;
    /// Pooled over every run of every case in the group.
    double rom_loss = 0.0;
    double p90_abs_loss = 0.0;
    /// 90th percentile of the per-case ROM losses.
    double p90_case_rom_loss = 0.0;
};

LossSummary summarize(std::span<const PairedCase> cases);

enum class GroupKey { ErrorType, Scenario, EtaLevel, DeadlineRegime, InventoryLevel };

std::string_view to_string(GroupKey key);
GroupKey parse_group_key(std::string_view name);

struct GroupRow {
    std::string key;
    LossSummary summary;
};

/// One row per distinct key value, in natural key order.
std::vector<GroupRow> group_summary(std::span<const PairedCase> cases, GroupKey key);

/// Error-type groups ordered by ROM loss, largest first.
std::vector<GroupRow> error_type_ranking(std::span<const PairedCase> cases);

enum class Reversal { NoReversal, RawReversal, SignificantReversal };

std::string_view to_string(Reversal r);

struct PairedTestResult {
    std::size_t runs = 0;
    double mean_diff = 0.0;  // mean of oracle_m - challenger_m
    double std_error = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    Reversal classification = Reversal::NoReversal;
};

/// Two-sided normal quantile for a confidence level, e.g. 1.959964 at 0.95.
double normal_critical_value(double level);

/// Normal-approximation interval for the mean paired difference.
PairedTestResult paired_difference_ci(std::span<const double> oracle,
                                      std::span<const double> challenger, double level = 0.95);

struct SanityCell {
    std::string scenario_id;
    std::string env_id;
    double eta = 0.0;
    DeadlineKind regime = DeadlineKind::Flat;
    int inventory = 0;
    /// Empty when every proxy matches the oracle policy (degenerate cell).
    std::optional<std::string> challenger;
    std::optional<PairedTestResult> test;

    bool degenerate() const { return !challenger.has_value(); }
};

struct SanityReport {
    double level = 0.95;
    std::vector<SanityCell> cells;
    std::size_t degenerate_cells = 0;
    std::size_t no_reversals = 0;
    std::size_t raw_only_reversals = 0;
    std::size_t significant_reversals = 0;
    /// Share of all cells whose best challenger had the higher mean,
    /// significant or not.
    double raw_reversal_rate = 0.0;
    double significant_reversal_rate = 0.0;
    double mean_diff = 0.0;  // over non-degenerate cells
    double min_diff = 0.0;
};

/// Compares each cell's oracle with its best distinct non-oracle policy
/// (highest mean revenue among proxies whose policy differs on some
/// reachable state).
SanityReport oracle_sanity_report(const ResultsStore& results, double level = 0.95);

}  // namespace ticketdp
