#include "ticketdp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

namespace ticketdp {

namespace {

using CellKey = std::pair<std::string, std::string>;

std::map<CellKey, const CaseResult*> index_oracles(const ResultsStore& results) {
    std::map<CellKey, const CaseResult*> oracles;
    for (const auto& c : results.cases) {
        if (!c.is_oracle) continue;
        if (!oracles.emplace(CellKey{c.scenario_id, c.env_id}, &c).second) {
            throw std::invalid_argument(
                fmt::format("duplicate oracle for {}/{}", c.scenario_id, c.env_id));
        }
    }
    return oracles;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Sort key giving natural order within one grouping.
struct GroupOrder {
    int rank = 0;
    double number = 0.0;
    std::string text;

    auto operator<=>(const GroupOrder&) const = default;
};

std::pair<std::string, GroupOrder> group_of(const PairedCase& c, GroupKey key) {
    switch (key) {
        case GroupKey::ErrorType:
            return {c.error_type,
                    {static_cast<int>(parse_error_type(c.error_type)), 0.0, c.error_type}};
        case GroupKey::Scenario:
            // SC2 before SC10.
            return {c.scenario_id, {static_cast<int>(c.scenario_id.size()), 0.0, c.scenario_id}};
        case GroupKey::EtaLevel: return {fmt::format("{}", c.eta), {0, c.eta, {}}};
        case GroupKey::DeadlineRegime:
            return {std::string(to_string(c.regime)), {static_cast<int>(c.regime), 0.0, {}}};
        case GroupKey::InventoryLevel:
            return {fmt::format("{}", c.inventory), {0, static_cast<double>(c.inventory), {}}};
    }
    throw std::invalid_argument("unknown group key");
}

}  // namespace

double rom_relative_loss(std::span<const double> oracle, std::span<const double> misspec) {
    if (oracle.size() != misspec.size()) {
        throw std::invalid_argument(fmt::format("rom_relative_loss: {} oracle runs vs {} misspecified",
                                                oracle.size(), misspec.size()));
    }
    const double oracle_total = sum(oracle);
    if (!(oracle_total > 0.0)) throw std::invalid_argument("rom_relative_loss: oracle revenue sums to zero");
    return (oracle_total - sum(misspec)) / oracle_total;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile: empty input");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile: p must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<PairedCase> pair_cases(const ResultsStore& results) {
    const auto oracles = index_oracles(results);
    std::vector<PairedCase> out;
    for (const auto& c : results.cases) {
        if (c.is_oracle) continue;
        const auto it = oracles.find({c.scenario_id, c.env_id});
        if (it == oracles.end()) {
            throw std::invalid_argument(
                fmt::format("case {}/{}/{} has no oracle", c.scenario_id, c.label, c.env_id));
        }
        const CaseResult& oracle = *it->second;
        if (oracle.revenues.size() != c.revenues.size() || c.revenues.empty()) {
            throw std::invalid_argument(fmt::format("case {}/{}/{}: run count mismatch with oracle",
                                                    c.scenario_id, c.label, c.env_id));
        }
        PairedCase p;
        p.scenario_id = c.scenario_id;
        p.label = c.label;
        p.error_type = c.error_type;
        p.env_id = c.env_id;
        p.eta = c.eta;
        p.regime = c.regime;
        p.inventory = c.inventory;
        p.distinct_from_oracle = c.distinct_from_oracle;
        p.runs = c.revenues.size();
        p.oracle_sum = sum(oracle.revenues);
        p.misspec_sum = sum(c.revenues);
        out.push_back(std::move(p));
    }
    return out;
}

AbsoluteLossStats absolute_loss_stats(std::span<const PairedCase> cases) {
    if (cases.empty()) throw std::invalid_argument("absolute_loss_stats: no cases");
    std::vector<double> losses;
    losses.reserve(cases.size());
    for (const auto& c : cases) losses.push_back(c.abs_loss());
    AbsoluteLossStats s;
    s.mean = sum(losses) / static_cast<double>(losses.size());
    s.median = percentile(losses, 0.5);
    s.p90 = percentile(losses, 0.9);
    return s;
}

LossSummary summarize(std::span<const PairedCase> cases) {
    if (cases.empty()) throw std::invalid_argument("summarize: no cases");
    LossSummary s;
    s.case_count = cases.size();
    double oracle_means = 0.0;
    double misspec_means = 0.0;
    double oracle_total = 0.0;
    double misspec_total = 0.0;
    std::vector<double> case_rom;
    case_rom.reserve(cases.size());
    for (const auto& c : cases) {
        oracle_means += c.oracle_mean();
        misspec_means += c.misspec_mean();
        oracle_total += c.oracle_sum;
        misspec_total += c.misspec_sum;
        case_rom.push_back(c.rom_loss());
    }
    const auto n = static_cast<double>(cases.size());
    s.mean_oracle_revenue = oracle_means / n;
    s.mean_misspec_revenue = misspec_means / n;
    s.rom_loss = (oracle_total - misspec_total) / oracle_total;

    const auto abs = absolute_loss_stats(cases);
    s.mean_abs_loss = abs.mean;
    s.median_abs_loss = abs.median;
    s.p90_abs_loss = abs.p90;
    s.p90_case_rom_loss = percentile(std::move(case_rom), 0.9);
    return s;
}

std::string_view to_string(GroupKey key) {
    switch (key) {
        case GroupKey::ErrorType: return "error_type";
        case GroupKey::Scenario: return "scenario";
        case GroupKey::EtaLevel: return "eta_level";
        case GroupKey::DeadlineRegime: return "deadline_regime";
        case GroupKey::InventoryLevel: return "inventory_level";
    }
    return "?";
}

GroupKey parse_group_key(std::string_view name) {
    for (auto k : {GroupKey::ErrorType, GroupKey::Scenario, GroupKey::EtaLevel,
                   GroupKey::DeadlineRegime, GroupKey::InventoryLevel}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument(fmt::format("unknown grouping key '{}'", name));
}

std::vector<GroupRow> group_summary(std::span<const PairedCase> cases, GroupKey key) {
    std::map<GroupOrder, std::pair<std::string, std::vector<PairedCase>>> groups;
    for (const auto& c : cases) {
        auto [name, order] = group_of(c, key);
        auto& slot = groups[order];
        slot.first = std::move(name);
        slot.second.push_back(c);
    }
    std::vector<GroupRow> rows;
    for (auto& [order, group] : groups) rows.push_back({group.first, summarize(group.second)});
    return rows;
}

std::vector<GroupRow> error_type_ranking(std::span<const PairedCase> cases) {
    auto rows = group_summary(cases, GroupKey::ErrorType);
    std::stable_sort(rows.begin(), rows.end(), [](const GroupRow& a, const GroupRow& b) {
        return a.summary.rom_loss > b.summary.rom_loss;
    });
    return rows;
}

std::string_view to_string(Reversal r) {
    switch (r) {
        case Reversal::NoReversal: return "no_reversal";
        case Reversal::RawReversal: return "raw_reversal";
        case Reversal::SignificantReversal: return "significant_reversal";
    }
    return "?";
}

double normal_critical_value(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(),
                                 1.0 - (1.0 - level) / 2.0);
}

PairedTestResult paired_difference_ci(std::span<const double> oracle,
                                      std::span<const double> challenger, double level) {
    if (oracle.size() != challenger.size()) {
        throw std::invalid_argument("paired_difference_ci: run counts differ");
    }
    if (oracle.size() < 2) throw std::invalid_argument("paired_difference_ci: need at least 2 runs");
    const std::size_t n = oracle.size();
    std::vector<double> d(n);
    for (std::size_t m = 0; m < n; ++m) d[m] = oracle[m] - challenger[m];
    const double mean = sum(d) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    PairedTestResult r;
    r.runs = n;
    r.mean_diff = mean;
    r.std_error = sd / std::sqrt(static_cast<double>(n));
    const double half = normal_critical_value(level) * r.std_error;
    r.lower = mean - half;
    r.upper = mean + half;
    if (r.upper < 0.0) {
        r.classification = Reversal::SignificantReversal;
    } else if (mean < 0.0) {
        r.classification = Reversal::RawReversal;
    } else {
        r.classification = Reversal::NoReversal;
    }
    return r;
}

SanityReport oracle_sanity_report(const ResultsStore& results, double level) {
    const auto oracles = index_oracles(results);

    // Best distinct challenger per cell; ties keep the first in file order.
    std::map<CellKey, const CaseResult*> best;
    std::map<CellKey, double> best_mean;
    for (const auto& c : results.cases) {
        if (c.is_oracle) continue;
        const CellKey key{c.scenario_id, c.env_id};
        if (!oracles.contains(key)) {
            throw std::invalid_argument(
                fmt::format("cell {}/{} is missing its oracle", c.scenario_id, c.env_id));
        }
        if (!c.distinct_from_oracle) continue;
        const double mean = sum(c.revenues) / static_cast<double>(c.revenues.size());
        auto it = best_mean.find(key);
        if (it == best_mean.end() || mean > it->second) {
            best_mean[key] = mean;
            best[key] = &c;
        }
    }

    SanityReport report;
    report.level = level;
    double diff_total = 0.0;
    std::size_t tested = 0;
    std::size_t raw = 0;
    for (const auto& c : results.cases) {
        if (!c.is_oracle) continue;
        SanityCell cell;
        cell.scenario_id = c.scenario_id;
        cell.env_id = c.env_id;
        cell.eta = c.eta;
        cell.regime = c.regime;
        cell.inventory = c.inventory;
        const auto it = best.find({c.scenario_id, c.env_id});
        if (it == best.end()) {
            ++report.degenerate_cells;
        } else {
            cell.challenger = it->second->label;
            cell.test = paired_difference_ci(c.revenues, it->second->revenues, level);
            switch (cell.test->classification) {
                case Reversal::NoReversal: ++report.no_reversals; break;
                case Reversal::RawReversal: ++report.raw_only_reversals; break;
                case Reversal::SignificantReversal: ++report.significant_reversals; break;
            }
            if (cell.test->mean_diff < 0.0) ++raw;
            diff_total += cell.test->mean_diff;
            report.min_diff = tested == 0 ? cell.test->mean_diff
                                          : std::min(report.min_diff, cell.test->mean_diff);
            ++tested;
        }
        report.cells.push_back(std::move(cell));
    }
    if (!report.cells.empty()) {
        const auto n = static_cast<double>(report.cells.size());
        report.raw_reversal_rate = static_cast<double>(raw) / n;
        report.significant_reversal_rate = static_cast<double>(report.significant_reversals) / n;
    }
    if (tested > 0) report.mean_diff = diff_total / static_cast<double>(tested);
    return report;
}

}  // namespace ticketdp
