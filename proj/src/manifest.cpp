#include "ticketdp/manifest.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace ticketdp {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kUp = 0.5;             // x1.5
constexpr double kDown = 1.0 / 1.5 - 1;  // x1/1.5

json component_to_json(const ShapeComponent& c) {
    return std::visit(
        overloaded{
            [](const Peak& p) {
                return json{{"kind", "Peak"}, {"center", p.center}, {"width", p.width},
                            {"height", p.height}};
            },
            [](const Plateau& p) {
                return json{{"kind", "Plateau"}, {"start", p.start}, {"end", p.end},
                            {"level", p.level}};
            },
            [](const LogisticRamp& r) {
                return json{{"kind", "LogisticRamp"}, {"midpoint", r.midpoint},
                            {"steepness", r.steepness}, {"asymptote", r.asymptote}};
            },
            [](const ExpDecay& d) {
                return json{{"kind", "ExpDecay"}, {"start", d.start}, {"rate", d.rate},
                            {"initial", d.initial}};
            },
            [](const FinalRamp& r) {
                return json{{"kind", "FinalRamp"}, {"start", r.start}, {"end_height", r.end_height}};
            },
        },
        c);
}

ShapeComponent component_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "Peak") {
        return Peak{j.at("center").get<double>(), j.at("width").get<double>(),
                    j.at("height").get<double>()};
    }
    if (kind == "Plateau") {
        return Plateau{j.at("start").get<double>(), j.at("end").get<double>(),
                       j.at("level").get<double>()};
    }
    if (kind == "LogisticRamp") {
        return LogisticRamp{j.at("midpoint").get<double>(), j.at("steepness").get<double>(),
                            j.at("asymptote").get<double>()};
    }
    if (kind == "ExpDecay") {
        return ExpDecay{j.at("start").get<double>(), j.at("rate").get<double>(),
                        j.at("initial").get<double>()};
    }
    if (kind == "FinalRamp") {
        return FinalRamp{j.at("start").get<double>(), j.at("end_height").get<double>()};
    }
    throw std::invalid_argument(fmt::format("unknown component kind '{}'", kind));
}

}  // namespace

const ScenarioEntry& ScenarioManifest::find(const std::string& scenario_id) const {
    for (const auto& e : scenarios) {
        if (e.spec.scenario_id == scenario_id) return e;
    }
    throw std::out_of_range(fmt::format("scenario '{}' not in manifest", scenario_id));
}

ScenarioManifest default_manifest(int horizon_t) {
    if (horizon_t < 10) throw std::invalid_argument("default_manifest: horizon must be >= 10");
    const double T = horizon_t;
    auto at = [T](double frac) { return frac * T; };

    using E = ErrorType;
    ScenarioManifest m;
    m.horizon_t = horizon_t;

    m.scenarios.push_back({
        {"SC1", "Peak + late growth",
         {Peak{at(0.45), at(0.10), 10.0}, FinalRamp{at(0.75), 24.0}}, 2.0},
        {{E::PeakTiming, 0, 1.0},
         {E::PeakHeight, 0, kUp},
         {E::LateGrowthMagnitude, 1, kDown},
         {E::OmittedLateGrowth, 1, 1.0},
         {E::LateGrowthTiming, 1, 1.0}},
    });
    m.scenarios.push_back({
        {"SC2", "Isolated peak", {Peak{at(0.55), at(0.05), 20.0}}, 3.0},
        {{E::PeakTiming, 0, 1.0},
         {E::PeakTiming, 0, -1.0},
         {E::PeakHeight, 0, kUp},
         {E::PeakHeight, 0, kDown},
         {E::Oversmoothing, 0, 1.0}},
    });
    m.scenarios.push_back({
        {"SC3", "Peak + peak",
         {Peak{at(0.30), at(0.06), 14.0}, Peak{at(0.70), at(0.06), 14.0}}, 2.0},
        {{E::PeakTiming, 0, 1.0},
         {E::PeakHeight, 1, kUp},
         {E::OmittedPeak, 1, 1.0},
         {E::Oversmoothing, 0, 1.0},
         {E::PeakTiming, 1, -1.0}},
    });
    m.scenarios.push_back({
        {"SC4", "Broad peak + late spike",
         {Peak{at(0.40), at(0.15), 8.0}, FinalRamp{at(0.88), 30.0}}, 2.0},
        {{E::PeakTiming, 0, 1.0},
         {E::PeakHeight, 0, kUp},
         {E::LateGrowthMagnitude, 1, kUp},
         {E::OmittedLateGrowth, 1, 1.0},
         {E::LateGrowthTiming, 1, 1.0}},
    });
    m.scenarios.push_back({
        {"SC5", "Peak + post-peak decay",
         {Peak{at(0.25), at(0.05), 16.0}, ExpDecay{at(0.25), 6.0 / T, 10.0}}, 2.0},
        {{E::PeakTiming, 0, 1.0},
         {E::PeakHeight, 0, kUp},
         {E::SlopeError, 1, kUp},
         {E::SlopeError, 1, kDown},
         {E::Oversmoothing, 0, 1.0}},
    });
    m.scenarios.push_back({
        {"SC6", "Double peak + late growth",
         {Peak{at(0.25), at(0.06), 10.0}, Peak{at(0.50), at(0.06), 10.0},
          LogisticRamp{at(0.85), 15.0 / T, 20.0}},
         2.0},
        {{E::PeakTiming, 1, 1.0},
         {E::OmittedPeak, 0, 1.0},
         {E::LateGrowthMagnitude, 2, kDown},
         {E::OmittedLateGrowth, 2, 1.0},
         {E::PeakHeight, 1, kUp}},
    });
    m.scenarios.push_back({
        {"SC7", "Monotone growth + local peak",
         {LogisticRamp{at(0.50), 8.0 / T, 14.0}, Peak{at(0.30), at(0.05), 8.0}}, 1.0},
        {{E::PeakTiming, 1, 1.0},
         {E::PeakHeight, 1, kUp},
         {E::OmittedPeak, 1, 1.0},
         {E::SlopeError, 0, kUp},
         {E::LateGrowthMagnitude, 0, kDown}},
    });
    m.scenarios.push_back({
        {"SC8", "Plateau + final ramp",
         {Plateau{at(0.20), at(0.60), 8.0}, FinalRamp{at(0.70), 26.0}}, 2.0},
        {{E::PlateauLevel, 0, kUp},
         {E::PlateauLevel, 0, kDown},
         {E::LateGrowthMagnitude, 1, kUp},
         {E::OmittedLateGrowth, 1, 1.0},
         {E::LateGrowthTiming, 1, 1.0}},
    });
    m.scenarios.push_back({
        {"SC9", "Sustained level shift + peak + final ramp",
         {Plateau{at(0.50), T, 6.0}, Peak{at(0.30), at(0.06), 12.0}, FinalRamp{at(0.80), 20.0}},
         2.0},
        {{E::PeakTiming, 1, 1.0},
         {E::PlateauLevel, 0, kDown},
         {E::OmittedPeak, 1, 1.0},
         {E::OmittedLateGrowth, 2, 1.0},
         {E::LateGrowthMagnitude, 2, kUp}},
    });
    return m;
}

std::vector<std::string> validate_manifest(const ScenarioManifest& manifest) {
    std::vector<std::string> errors;
    if (manifest.horizon_t < 1) errors.emplace_back("manifest horizon_t must be at least 1");
    if (manifest.scenarios.empty()) errors.emplace_back("manifest has no scenarios");
    std::set<std::string> seen;
    for (const auto& entry : manifest.scenarios) {
        const auto& id = entry.spec.scenario_id;
        if (id.empty()) errors.emplace_back("scenario with empty id");
        if (!seen.insert(id).second) errors.push_back(fmt::format("duplicate scenario id {}", id));
        if (entry.proxies.empty()) errors.push_back(fmt::format("{}: no proxies", id));
        try {
            build_scenario(entry.spec, manifest.horizon_t, 1.0);
        } catch (const std::exception& e) {
            errors.push_back(e.what());
            continue;
        }
        for (const auto& proxy : entry.proxies) {
            try {
                apply_misspecification(entry.spec, proxy, manifest.horizon_t, 1.0);
            } catch (const std::exception& e) {
                errors.push_back(e.what());
            }
        }
    }
    return errors;
}

json to_json(const ScenarioManifest& manifest) {
    json scenarios = json::array();
    for (const auto& entry : manifest.scenarios) {
        json components = json::array();
        for (const auto& c : entry.spec.components) components.push_back(component_to_json(c));
        json proxies = json::array();
        for (const auto& p : entry.proxies) {
            proxies.push_back({{"error_type", std::string(to_string(p.error_type))},
                               {"target_component", p.target_component},
                               {"magnitude", p.magnitude}});
        }
        scenarios.push_back({{"scenario_id", entry.spec.scenario_id},
                             {"description", entry.spec.description},
                             {"base_level", entry.spec.base_level},
                             {"components", std::move(components)},
                             {"proxies", std::move(proxies)}});
    }
    return {{"version", manifest.version},
            {"horizon_t", manifest.horizon_t},
            {"scenarios", std::move(scenarios)}};
}

ScenarioManifest manifest_from_json(const json& j) {
    ScenarioManifest m;
    m.version = j.value("version", 1);
    m.horizon_t = j.at("horizon_t").get<int>();
    for (const auto& s : j.at("scenarios")) {
        ScenarioEntry entry;
        entry.spec.scenario_id = s.at("scenario_id").get<std::string>();
        entry.spec.description = s.value("description", std::string{});
        entry.spec.base_level = s.value("base_level", 0.0);
        for (const auto& c : s.at("components")) entry.spec.components.push_back(component_from_json(c));
        for (const auto& p : s.at("proxies")) {
            entry.proxies.push_back({parse_error_type(p.at("error_type").get<std::string>()),
                                     p.at("target_component").get<std::size_t>(),
                                     p.at("magnitude").get<double>()});
        }
        m.scenarios.push_back(std::move(entry));
    }
    return m;
}

ScenarioManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open manifest {}", path.string()));
    return manifest_from_json(json::parse(in));
}

void save_manifest(const ScenarioManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("cannot write manifest {}", path.string()));
    out << to_json(manifest).dump(2) << '\n';
}

}  // namespace ticketdp
