// Command-line front end: run the benchmark grid, build reports from saved
// results, and validate configs and manifests.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ticketdp/experiment.hpp"
#include "ticketdp/manifest.hpp"
#include "ticketdp/report.hpp"
#include "ticketdp/results_io.hpp"

namespace {

using namespace ticketdp;

struct ConfigArgs {
    std::string config_path;
    std::string preset;
    std::string manifest_path;
};

void add_config_args(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", args.preset, "Base preset")
        ->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--manifest", args.manifest_path, "Scenario manifest (JSON)")
        ->check(CLI::ExistingFile);
}

BenchmarkConfig resolve_config(const ConfigArgs& args) {
    BenchmarkConfig config = args.preset.empty() ? BenchmarkConfig::full()
                                                 : BenchmarkConfig::preset(args.preset);
    if (!args.config_path.empty()) config = load_config(args.config_path, config);
    if (!args.manifest_path.empty()) config.manifest_path = args.manifest_path;
    return config;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_run(const ConfigArgs& args, const std::optional<int>& runs,
            const std::optional<std::uint64_t>& seed, const std::string& out_dir,
            const std::string& scenarios, bool dump, const std::optional<int>& threads,
            bool with_report, bool quiet) {
    BenchmarkConfig config = resolve_config(args);
    if (runs) config.runs = *runs;
    if (seed) config.master_seed = *seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!scenarios.empty()) config.scenarios = split_list(scenarios);
    if (dump) config.dump_trajectories = true;
    if (threads) config.threads = *threads;

    const ScenarioManifest manifest = resolve_manifest(config);
    const auto start = std::chrono::steady_clock::now();
    ProgressFn progress;
    if (!quiet) {
        progress = [](std::size_t done, std::size_t total) {
            fmt::print(stderr, "\rcells {}/{}", done, total);
            if (done == total) fmt::print(stderr, "\n");
        };
    }
    const ResultsStore store = run_benchmark(config, manifest, progress);
    write_results(store, config, manifest, config.output_dir);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("{} cases, {} failures, {:.1f}s -> {}\n", store.cases.size(), store.failures.size(),
               elapsed, config.output_dir);

    if (with_report && !store.cases.empty()) {
        ReportOptions options;
        options.snapshot_source = config.output_dir;
        emit_report(store, std::filesystem::path(config.output_dir) / "report", options);
    }
    for (const auto& f : store.failures) fmt::print(stderr, "failed: {}\n", f);
    return store.ok() ? 0 : 1;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir,
               const std::vector<std::string>& group_by, double confidence) {
    ReportOptions options;
    if (!group_by.empty()) {
        options.group_by.clear();
        for (const auto& k : group_by) options.group_by.push_back(parse_group_key(k));
    }
    options.confidence = confidence;
    options.snapshot_source = in_dir;
    const ResultsStore store = read_results(in_dir);
    emit_report(store, out_dir, options);

    const auto paired = pair_cases(store);
    const auto global = summarize(paired);
    fmt::print("{} non-oracle cases, ROM loss {:.2f}% -> {}\n", global.case_count,
               100.0 * global.rom_loss, out_dir);
    return store.ok() ? 0 : 1;
}

int cmd_validate(const ConfigArgs& args) {
    const BenchmarkConfig config = resolve_config(args);
    auto errors = validate_config(config);
    std::size_t scenario_count = 0;
    std::size_t proxy_count = 0;
    try {
        const ScenarioManifest manifest = resolve_manifest(config);
        for (auto& e : validate_manifest(manifest)) errors.push_back(std::move(e));
        scenario_count = manifest.scenarios.size();
        for (const auto& s : manifest.scenarios) proxy_count += s.proxies.size();
    } catch (const std::exception& e) {
        errors.emplace_back(e.what());
    }
    if (!errors.empty()) {
        for (const auto& e : errors) fmt::print(stderr, "error: {}\n", e);
        return 1;
    }
    const std::size_t envs =
        config.eta_levels.size() * config.q_levels.size() * config.deadline_regimes.size();
    fmt::print("ok: {} scenarios, {} proxies, {} environments, target mass {:.6g}\n",
               scenario_count, proxy_count, envs, calibrated_target_mass(config));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ticket-pricing DP benchmark under demand-profile misspecification"};
    app.require_subcommand(1);

    ConfigArgs run_args;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string out_dir;
    std::string scenarios;
    bool dump = false;
    bool with_report = false;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Solve and simulate the scenario x proxy x environment grid");
    add_config_args(run, run_args);
    run->add_option("--runs", runs, "Simulation runs per case")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--scenarios", scenarios, "Comma-separated scenario ids");
    run->add_option("--threads", threads, "Worker threads (0 = all cores)");
    run->add_flag("--dump-trajectories", dump, "Write the first runs' trajectories");
    run->add_flag("--report", with_report, "Also write a report into OUT/report");
    run->add_flag("--quiet", quiet, "No progress output");

    std::string in_dir;
    std::string report_out;
    std::vector<std::string> group_by;
    double confidence = 0.95;
    auto* report = app.add_subcommand("report", "Compute loss metrics from saved results");
    report->add_option("--in", in_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("--out", report_out, "Report directory")->required();
    report->add_option("--group-by", group_by, "Grouping key (repeatable)")
        ->check(CLI::IsMember(
            {"error_type", "scenario", "eta_level", "deadline_regime", "inventory_level"}));
    report->add_option("--confidence", confidence, "Confidence level for paired intervals")
        ->check(CLI::Range(0.5, 0.9999));

    ConfigArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Check a config and its scenario manifest");
    add_config_args(validate, validate_args);

    int horizon = 60;
    std::string manifest_out;
    auto* manifest = app.add_subcommand("manifest", "Write the built-in scenario manifest");
    manifest->add_option("--horizon", horizon, "Horizon T")->check(CLI::Range(10, 100000));
    manifest->add_option("--out", manifest_out, "Output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(run_args, runs, seed, out_dir, scenarios, dump, threads, with_report, quiet);
        }
        if (*report) return cmd_report(in_dir, report_out, group_by, confidence);
        if (*validate) return cmd_validate(validate_args);
        if (*manifest) {
            save_manifest(default_manifest(horizon), manifest_out);
            return 0;
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 0;
}
