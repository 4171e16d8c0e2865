#pragma once

#include <filesystem>

#include "ticketdp/experiment.hpp"

namespace ticketdp {

// Files written into a results directory.
inline constexpr const char* kRevenuesFile = "results.csv";      // scenario,label,env_id,m,revenue
inline constexpr const char* kCasesFile = "cases.csv";           // one row per case
inline constexpr const char* kTimingsFile = "timings.csv";       // wall clock, not reproducible
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kFailuresFile = "failures.txt";
inline constexpr const char* kTrajectoriesFile = "trajectories.csv";

/// Persists raw per-run revenues plus case metadata, config and manifest.
/// Everything except the timings file is a pure function of the inputs.
void write_results(const ResultsStore& store, const BenchmarkConfig& config,
                   const ScenarioManifest& manifest, const std::filesystem::path& dir);

/// Reads results.csv and cases.csv back; revenues round-trip exactly.
ResultsStore read_results(const std::filesystem::path& dir);

}  // namespace ticketdp
