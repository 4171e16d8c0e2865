#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <gtest/gtest.h>

#include "ticketdp/experiment.hpp"
#include "ticketdp/results_io.hpp"

using namespace ticketdp;

namespace {

BenchmarkConfig tiny_config() {
    BenchmarkConfig c;
    c.horizon_t = 12;
    c.eta_levels = {0.01};
    c.q_levels = {10};
    c.deadline_regimes = {DeadlineRegime::flat()};
    c.runs = 40;
    c.threads = 1;
    return c;
}

}  // namespace

TEST(Presets, ShapesAndTargetMass) {
    const auto full = BenchmarkConfig::full();
    EXPECT_EQ(full.horizon_t, 60);
    EXPECT_EQ(full.runs, 3000);
    EXPECT_EQ(full.grid.size(), 13u);
    // 1.1 * 700 / e^{-0.01 * 100}
    EXPECT_NEAR(calibrated_target_mass(full), 770.0 * std::exp(1.0), 1e-9);
    const auto desk = BenchmarkConfig::desk();
    EXPECT_EQ(desk.runs, 300);
    EXPECT_TRUE(validate_config(desk).empty());
    EXPECT_THROW(BenchmarkConfig::preset("huge"), std::invalid_argument);

    auto fixed = desk;
    fixed.target_mass = 123.0;
    EXPECT_EQ(calibrated_target_mass(fixed), 123.0);
}

TEST(ValidateConfig, ReportsProblems) {
    auto c = tiny_config();
    c.runs = 0;
    c.eta_levels = {0.01, 0.01};
    c.deadline_regimes = {DeadlineRegime::flat(), DeadlineRegime::flat()};
    c.grid = PriceGrid{{10.0}};
    const auto errors = validate_config(c);
    EXPECT_GE(errors.size(), 4u);
}

TEST(ConfigJson, RoundTripAndPreset) {
    auto c = BenchmarkConfig::desk();
    c.master_seed = 99;
    c.scenarios = {"SC2"};
    const auto back = config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));

    const auto from_preset = config_from_json(nlohmann::json{{"preset", "desk"}, {"runs", 17}});
    EXPECT_EQ(from_preset.runs, 17);
    EXPECT_EQ(from_preset.horizon_t, BenchmarkConfig::desk().horizon_t);
}

TEST(ExpandGrid, DefaultCounts) {
    const auto config = BenchmarkConfig::full();
    const auto grid = expand_grid(config, resolve_manifest(config));
    EXPECT_EQ(grid.envs.size(), 27u);
    EXPECT_EQ(grid.oracle_case_count(), 243u);
    EXPECT_EQ(grid.proxy_case_count(), 1215u);
    EXPECT_EQ(grid.cases.size(), 1458u);
}

TEST(ExpandGrid, SingleScenarioProxyEnvironment) {
    auto config = tiny_config();
    auto manifest = default_manifest(config.horizon_t);
    manifest.scenarios.resize(1);
    manifest.scenarios[0].proxies.resize(1);
    const auto grid = expand_grid(config, manifest);
    EXPECT_EQ(grid.oracle_case_count(), 1u);
    EXPECT_EQ(grid.proxy_case_count(), 1u);
    EXPECT_TRUE(grid.cases[0].is_oracle());
}

TEST(ExpandGrid, EnvIdsIndependentOfAxisOrder) {
    auto a = BenchmarkConfig::desk();
    auto b = a;
    std::reverse(b.eta_levels.begin(), b.eta_levels.end());
    std::reverse(b.q_levels.begin(), b.q_levels.end());
    std::reverse(b.deadline_regimes.begin(), b.deadline_regimes.end());
    const auto ga = expand_grid(a, resolve_manifest(a));
    const auto gb = expand_grid(b, resolve_manifest(b));
    ASSERT_EQ(ga.envs.size(), gb.envs.size());
    for (std::size_t e = 0; e < ga.envs.size(); ++e) EXPECT_EQ(ga.envs[e].env_id, gb.envs[e].env_id);
    EXPECT_EQ(make_env_id(0.0075, DeadlineKind::Strong, 500), "eta0.0075_Strong_Q500");
}

TEST(ExpandGrid, UnknownScenarioRejected) {
    auto config = tiny_config();
    config.scenarios = {"SC42"};
    EXPECT_THROW(expand_grid(config, default_manifest(config.horizon_t)), std::invalid_argument);
}

TEST(RunCase, OracleAndNullProxyShareRevenues) {
    auto config = tiny_config();
    auto manifest = default_manifest(config.horizon_t);
    manifest.scenarios.resize(1);
    manifest.scenarios[0].proxies = {{ErrorType::PeakHeight, 0, 0.0}, {ErrorType::PeakHeight, 0, 0.5}};
    const auto grid = expand_grid(config, manifest);
    const auto oracle = run_case(grid, grid.cases[0], config);
    const auto null = run_case(grid, grid.cases[1], config);
    EXPECT_TRUE(oracle.is_oracle);
    EXPECT_EQ(oracle.label, "oracle");
    EXPECT_EQ(null.revenues, oracle.revenues);
    EXPECT_FALSE(null.distinct_from_oracle);
    EXPECT_EQ(null.label, "PeakHeight-1");

    const auto again = run_case(grid, grid.cases[2], config);
    const auto twice = run_case(grid, grid.cases[2], config);
    EXPECT_EQ(again.revenues, twice.revenues);
    EXPECT_EQ(static_cast<int>(again.revenues.size()), config.runs);
}

TEST(RunBenchmark, OneOraclePerCellAndThreadIndependence) {
    auto config = tiny_config();
    config.q_levels = {6, 10};
    config.deadline_regimes = {DeadlineRegime::flat(), DeadlineRegime::strong()};
    config.scenarios = {"SC1", "SC5"};
    const auto manifest = default_manifest(config.horizon_t);
    const auto one = run_benchmark(config, manifest);
    config.threads = 3;
    const auto three = run_benchmark(config, manifest);
    ASSERT_TRUE(one.ok());
    ASSERT_EQ(one.cases.size(), 2u * 4u * 6u);
    ASSERT_EQ(one.cases.size(), three.cases.size());

    std::map<std::pair<std::string, std::string>, int> oracles;
    for (std::size_t i = 0; i < one.cases.size(); ++i) {
        EXPECT_EQ(one.cases[i].revenues, three.cases[i].revenues);
        EXPECT_EQ(one.cases[i].label, three.cases[i].label);
        if (one.cases[i].is_oracle) ++oracles[{one.cases[i].scenario_id, one.cases[i].env_id}];
    }
    EXPECT_EQ(oracles.size(), 8u);
    for (const auto& [key, n] : oracles) EXPECT_EQ(n, 1);
}

TEST(ResultsIo, WriteReadRoundTrip) {
    auto config = tiny_config();
    config.scenarios = {"SC2"};
    config.dump_trajectories = true;
    config.trajectory_dump_runs = 2;
    const auto manifest = default_manifest(config.horizon_t);
    const auto store = run_benchmark(config, manifest);
    const auto dir = std::filesystem::temp_directory_path() / "ticketdp_io_roundtrip";
    std::filesystem::remove_all(dir);
    write_results(store, config, manifest, dir);
    for (const char* f : {kRevenuesFile, kCasesFile, kTimingsFile, kConfigFile, kManifestFile,
                          kFailuresFile, kTrajectoriesFile}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    const auto back = read_results(dir);
    ASSERT_EQ(back.cases.size(), store.cases.size());
    for (std::size_t i = 0; i < store.cases.size(); ++i) {
        EXPECT_EQ(back.cases[i].revenues, store.cases[i].revenues);
        EXPECT_EQ(back.cases[i].label, store.cases[i].label);
        EXPECT_EQ(back.cases[i].error_type, store.cases[i].error_type);
        EXPECT_EQ(back.cases[i].is_oracle, store.cases[i].is_oracle);
        EXPECT_EQ(back.cases[i].distinct_from_oracle, store.cases[i].distinct_from_oracle);
        EXPECT_EQ(back.cases[i].eta, store.cases[i].eta);
        EXPECT_EQ(back.cases[i].regime, store.cases[i].regime);
        EXPECT_EQ(back.cases[i].inventory, store.cases[i].inventory);
    }
    std::ifstream header(dir / kRevenuesFile);
    std::string line;
    std::getline(header, line);
    EXPECT_EQ(line, "scenario,label,env_id,m,revenue");
    std::filesystem::remove_all(dir);
}

TEST(ResultsIo, MissingDirectoryThrows) {
    EXPECT_THROW(read_results("/nonexistent/ticketdp"), std::runtime_error);
}
