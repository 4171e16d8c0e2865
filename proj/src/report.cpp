#include "ticketdp/report.hpp"

#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include "ticketdp/results_io.hpp"

namespace ticketdp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSummaryColumns =
    "cases,mean_oracle_revenue,mean_misspec_revenue,mean_abs_loss,median_abs_loss,rom_loss,"
    "p90_abs_loss,p90_case_rom_loss";

std::string summary_fields(const LossSummary& s) {
    return fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", s.case_count,
                       s.mean_oracle_revenue, s.mean_misspec_revenue, s.mean_abs_loss,
                       s.median_abs_loss, s.rom_loss, s.p90_abs_loss, s.p90_case_rom_loss);
}

json summary_json(const LossSummary& s) {
    return {{"cases", s.case_count},
            {"mean_oracle_revenue", s.mean_oracle_revenue},
            {"mean_misspec_revenue", s.mean_misspec_revenue},
            {"mean_abs_loss", s.mean_abs_loss},
            {"median_abs_loss", s.median_abs_loss},
            {"rom_loss", s.rom_loss},
            {"p90_abs_loss", s.p90_abs_loss},
            {"p90_case_rom_loss", s.p90_case_rom_loss}};
}

fmt::ostream open_out(const fs::path& path) {
    try {
        return fmt::output_file(path.string());
    } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format("cannot write {}: {}", path.string(), e.what()));
    }
}

std::string pct(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

}  // namespace

void emit_report(const ResultsStore& results, const fs::path& out_dir, const ReportOptions& options) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw std::runtime_error(fmt::format("cannot create report directory {}", out_dir.string()));
    }

    const auto paired = pair_cases(results);
    if (paired.empty()) throw std::invalid_argument("emit_report: no non-oracle cases");
    const LossSummary global = summarize(paired);
    const auto ranking = error_type_ranking(paired);
    const SanityReport sanity = oracle_sanity_report(results, options.confidence);

    {
        auto out = open_out(out_dir / kGlobalSummaryFile);
        out.print("{}\n{}\n", kSummaryColumns, summary_fields(global));
    }
    {
        auto out = open_out(out_dir / kErrorRankingFile);
        out.print("error_type,{}\n", kSummaryColumns);
        for (const auto& row : ranking) out.print("{},{}\n", row.key, summary_fields(row.summary));
    }

    std::map<GroupKey, std::vector<GroupRow>> breakdowns;
    {
        auto out = open_out(out_dir / kBreakdownsFile);
        out.print("group_by,group,{}\n", kSummaryColumns);
        for (GroupKey key : options.group_by) {
            auto rows = group_summary(paired, key);
            for (const auto& row : rows) {
                out.print("{},{},{}\n", to_string(key), row.key, summary_fields(row.summary));
            }
            breakdowns[key] = std::move(rows);
        }
    }
    {
        // Pooled ROM per environment cell; pivot on any two axes to plot.
        std::map<std::tuple<double, int, int>, std::vector<PairedCase>> cells;
        for (const auto& c : paired) {
            cells[{c.eta, static_cast<int>(c.regime), c.inventory}].push_back(c);
        }
        auto out = open_out(out_dir / kHeatmapFile);
        out.print("eta,regime,inventory,cases,rom_loss,mean_abs_loss\n");
        for (const auto& [key, group] : cells) {
            const auto s = summarize(group);
            out.print("{:.17g},{},{},{},{:.17g},{:.17g}\n", std::get<0>(key),
                      to_string(static_cast<DeadlineKind>(std::get<1>(key))), std::get<2>(key),
                      s.case_count, s.rom_loss, s.mean_abs_loss);
        }
    }
    {
        auto out = open_out(out_dir / kSanityFile);
        out.print("scenario,env_id,eta,regime,inventory,challenger,mean_diff,std_error,lower,upper,"
                  "classification\n");
        for (const auto& cell : sanity.cells) {
            if (cell.degenerate()) {
                out.print("{},{},{:.17g},{},{},,,,,,degenerate\n", cell.scenario_id, cell.env_id,
                          cell.eta, to_string(cell.regime), cell.inventory);
                continue;
            }
            const auto& t = *cell.test;
            out.print("{},{},{:.17g},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", cell.scenario_id,
                      cell.env_id, cell.eta, to_string(cell.regime), cell.inventory, *cell.challenger,
                      t.mean_diff, t.std_error, t.lower, t.upper, to_string(t.classification));
        }
    }

    json j;
    j["global"] = summary_json(global);
    for (const auto& row : ranking) {
        j["error_type_ranking"].push_back({{"error_type", row.key}, {"summary", summary_json(row.summary)}});
    }
    for (const auto& [key, rows] : breakdowns) {
        for (const auto& row : rows) {
            j["breakdowns"][std::string(to_string(key))].push_back(
                {{"group", row.key}, {"summary", summary_json(row.summary)}});
        }
    }
    j["oracle_sanity"] = {
        {"confidence", sanity.level},
        {"critical_value", normal_critical_value(sanity.level)},
        {"cells", sanity.cells.size()},
        {"degenerate_cells", sanity.degenerate_cells},
        {"no_reversal", sanity.no_reversals},
        {"raw_reversal_not_significant", sanity.raw_only_reversals},
        {"significant_reversal", sanity.significant_reversals},
        {"raw_reversal_rate", sanity.raw_reversal_rate},
        {"significant_reversal_rate", sanity.significant_reversal_rate},
        {"mean_paired_difference", sanity.mean_diff},
        {"min_paired_difference", sanity.min_diff},
        {"challenger_rule",
         "highest mean revenue among proxies whose policy differs from the oracle policy on at "
         "least one state reachable under the oracle policy"},
        {"interval", "normal approximation, mean +/- z * sd / sqrt(M)"},
    };
    j["failures"] = results.failures;
    {
        std::ofstream out(out_dir / kSummaryJsonFile);
        if (!out) throw std::runtime_error("cannot write summary.json");
        out << j.dump(2) << '\n';
    }

    {
        auto out = open_out(out_dir / kReportMarkdownFile);
        out.print("# Misspecification benchmark report\n\n## Global summary\n\n");
        out.print("| Cases | Mean oracle revenue | Mean misspecified revenue | Mean abs. loss | "
                  "Median abs. loss | ROM rel. loss, % | 90th pct. case ROM rel. loss, % |\n");
        out.print("|---:|---:|---:|---:|---:|---:|---:|\n");
        out.print("| {} | {:.2f} | {:.2f} | {:.2f} | {:.2f} | {} | {} |\n\n", global.case_count,
                  global.mean_oracle_revenue, global.mean_misspec_revenue, global.mean_abs_loss,
                  global.median_abs_loss, pct(global.rom_loss), pct(global.p90_case_rom_loss));

        out.print("## Error-type ranking\n\n| Error type | Cases | Mean abs. loss | ROM rel. loss, % |\n");
        out.print("|---|---:|---:|---:|\n");
        for (const auto& row : ranking) {
            out.print("| {} | {} | {:.2f} | {} |\n", row.key, row.summary.case_count,
                      row.summary.mean_abs_loss, pct(row.summary.rom_loss));
        }
        for (const auto& [key, rows] : breakdowns) {
            out.print("\n## By {}\n\n| {} | Cases | Mean abs. loss | ROM rel. loss, % |\n", to_string(key),
                      to_string(key));
            out.print("|---|---:|---:|---:|\n");
            for (const auto& row : rows) {
                out.print("| {} | {} | {:.2f} | {} |\n", row.key, row.summary.case_count,
                          row.summary.mean_abs_loss, pct(row.summary.rom_loss));
            }
        }
        out.print("\n## Oracle benchmark check ({:.0f}% intervals)\n\n", 100.0 * sanity.level);
        out.print("- cells: {} ({} degenerate)\n", sanity.cells.size(), sanity.degenerate_cells);
        out.print("- raw reversals: {}%\n", pct(sanity.raw_reversal_rate));
        out.print("- significant reversals: {}%\n", pct(sanity.significant_reversal_rate));
        out.print("- mean paired difference: {:.2f}\n", sanity.mean_diff);
        out.print("- minimum paired difference: {:.2f}\n", sanity.min_diff);
    }

    if (!options.snapshot_source.empty()) {
        for (const char* name : {kConfigFile, kManifestFile}) {
            const auto src = options.snapshot_source / name;
            const auto dst = out_dir / name;
            if (fs::exists(src) && !fs::equivalent(options.snapshot_source, out_dir)) {
                fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
            }
        }
    }
}

}  // namespace ticketdp
