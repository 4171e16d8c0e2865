#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ticketdp/demand.hpp"
#include "ticketdp/manifest.hpp"
#include "ticketdp/simulator.hpp"

namespace ticketdp {

struct BenchmarkConfig {
    std::vector<double> eta_levels{0.0075, 0.0100, 0.0130};
    std::vector<int> q_levels{500, 700, 900};
    std::vector<DeadlineRegime> deadline_regimes{DeadlineRegime::flat(), DeadlineRegime::moderate(),
                                                 DeadlineRegime::strong()};
    int runs = 3000;
    std::uint64_t master_seed = 20240917;
    int horizon_t = 60;
    PriceGrid grid = PriceGrid::uniform(40.0, 160.0, 10.0);

    /// Explicit total mass for every profile; when unset it is calibrated
    /// so that expected sales at the median price, median eta and flat phi
    /// equal target_sales_ratio x median Q.
    std::optional<double> target_mass;
    double target_sales_ratio = 1.1;

    /// Empty means the built-in manifest for horizon_t.
    std::string manifest_path;
    std::string output_dir = "results";
    /// Scenario ids to run; empty runs all.
    std::vector<std::string> scenarios;

    bool dump_trajectories = false;
    int trajectory_dump_runs = 5;
    double poisson_epsilon = kDefaultPoissonEpsilon;
    /// 0 uses the hardware concurrency.
    int threads = 0;

    static BenchmarkConfig full();
    static BenchmarkConfig desk();
    static BenchmarkConfig preset(const std::string& name);
};

std::vector<std::string> validate_config(const BenchmarkConfig& config);

double calibrated_target_mass(const BenchmarkConfig& config);

nlohmann::json to_json(const BenchmarkConfig& config);
/// Fields missing from `j` keep their values from `base`.
BenchmarkConfig config_from_json(const nlohmann::json& j, BenchmarkConfig base = {});
BenchmarkConfig load_config(const std::filesystem::path& path, BenchmarkConfig base = {});

/// Built-in manifest or the one at config.manifest_path.
ScenarioManifest resolve_manifest(const BenchmarkConfig& config);

struct EnvCell {
    std::string env_id;
    Environment env;
};

/// Value-based id, so it does not depend on axis order in the config.
std::string make_env_id(double eta, DeadlineKind regime, int inventory_q);

struct ProfileSet {
    std::string scenario_id;
    DemandProfile truth;
    std::vector<MisspecSpec> specs;
    std::vector<DemandProfile> proxies;  // labels from proxy_label()
};

struct CaseRef {
    std::size_t scenario = 0;
    std::size_t env = 0;
    std::optional<std::size_t> proxy;  // nullopt: oracle case

    bool is_oracle() const { return !proxy.has_value(); }
};

struct BenchmarkGrid {
    std::vector<ProfileSet> scenarios;
    std::vector<EnvCell> envs;  // sorted by (eta, regime, Q)
    std::vector<CaseRef> cases;

    std::size_t oracle_case_count() const;
    std::size_t proxy_case_count() const;
    const DemandProfile& profile(const CaseRef& c) const;
};

BenchmarkGrid expand_grid(const BenchmarkConfig& config, const ScenarioManifest& manifest);

struct CaseResult {
    std::string scenario_id;
    std::string label;       // "oracle" or proxy label
    std::string error_type;  // "oracle" for the oracle case
    std::string env_id;
    double eta = 0.0;
    DeadlineKind regime = DeadlineKind::Flat;
    int inventory = 0;
    bool is_oracle = false;
    /// False when the policy matches the oracle's on every reachable state.
    bool distinct_from_oracle = false;
    std::vector<double> revenues;  // run m = 1..M at index m - 1
    double solve_seconds = 0.0;
    double simulate_seconds = 0.0;
    std::vector<Trajectory> trajectories;  // first runs, when dumping
};

/// Solves the case's policy and simulates config.runs trajectories under
/// the scenario's true profile. `oracle_policy`, when given, is used for
/// the distinctness check instead of re-solving the oracle.
CaseResult run_case(const BenchmarkGrid& grid, const CaseRef& c, const BenchmarkConfig& config,
                    const PolicyTable* oracle_policy = nullptr);

struct ResultsStore {
    std::vector<CaseResult> cases;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every case, parallel across scenario x environment cells. Output
/// order follows grid.cases regardless of scheduling.
ResultsStore run_benchmark(const BenchmarkConfig& config, const ScenarioManifest& manifest,
                           const ProgressFn& progress = {});

}  // namespace ticketdp
