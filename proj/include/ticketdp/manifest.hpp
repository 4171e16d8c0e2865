#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ticketdp/scenario.hpp"

namespace ticketdp {

struct ScenarioEntry {
    ScenarioSpec spec;
    std::vector<MisspecSpec> proxies;
};

/// Versioned scenario library: component parameters and the proxies to
/// evaluate for each scenario, for one horizon.
struct ScenarioManifest {
    int version = 1;
    int horizon_t = 60;
    std::vector<ScenarioEntry> scenarios;

    const ScenarioEntry& find(const std::string& scenario_id) const;
};

/// The nine built-in scenarios SC1..SC9 with five proxies each. Component
/// times scale with the horizon so any T >= 10 gives the same shapes.
ScenarioManifest default_manifest(int horizon_t);

/// Empty when every scenario builds and every proxy is applicable.
std::vector<std::string> validate_manifest(const ScenarioManifest& manifest);

nlohmann::json to_json(const ScenarioManifest& manifest);
ScenarioManifest manifest_from_json(const nlohmann::json& j);

ScenarioManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const ScenarioManifest& manifest, const std::filesystem::path& path);

}  // namespace ticketdp
