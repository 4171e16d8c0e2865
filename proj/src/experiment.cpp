#include "ticketdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace ticketdp {

using nlohmann::json;

namespace {

template <class T>
T median_of(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json regime_to_json(const DeadlineRegime& r) {
    return {{"kind", std::string(to_string(r.kind))},
            {"ramp_window", r.ramp_window},
            {"intensity_coeff", r.intensity_coeff}};
}

DeadlineRegime regime_from_json(const json& j) {
    if (j.is_string()) {
        switch (parse_deadline_kind(j.get<std::string>())) {
            case DeadlineKind::Flat: return DeadlineRegime::flat();
            case DeadlineKind::Moderate: return DeadlineRegime::moderate();
            case DeadlineKind::Strong: return DeadlineRegime::strong();
        }
    }
    DeadlineRegime r;
    r.kind = parse_deadline_kind(j.at("kind").get<std::string>());
    r.ramp_window = j.value("ramp_window", 10);
    const double default_coeff =
        r.kind == DeadlineKind::Strong ? 1.5 : (r.kind == DeadlineKind::Moderate ? 0.5 : 0.0);
    r.intensity_coeff = j.value("intensity_coeff", default_coeff);
    return r;
}

struct Uniforms {
    std::size_t stride = 0;
    std::vector<double> data;

    std::span<const double> run(std::size_t m) const {
        return {data.data() + m * stride, stride};
    }
};

Uniforms cell_uniforms(const BenchmarkConfig& config, const std::string& scenario_id,
                       const std::string& env_id, int horizon_t) {
    Uniforms u;
    u.stride = static_cast<std::size_t>(horizon_t) + 1;
    u.data.reserve(u.stride * static_cast<std::size_t>(config.runs));
    for (int m = 1; m <= config.runs; ++m) {
        const auto stream =
            uniform_stream(derive_run_seed({config.master_seed, scenario_id, env_id, m}), u.stride);
        u.data.insert(u.data.end(), stream.begin(), stream.end());
    }
    return u;
}

CaseResult describe(const BenchmarkGrid& grid, const CaseRef& c) {
    const auto& set = grid.scenarios[c.scenario];
    const auto& cell = grid.envs[c.env];
    CaseResult r;
    r.scenario_id = set.scenario_id;
    r.env_id = cell.env_id;
    r.eta = cell.env.eta;
    r.regime = cell.env.deadline.kind;
    r.inventory = cell.env.inventory_q;
    r.is_oracle = c.is_oracle();
    if (r.is_oracle) {
        r.label = "oracle";
        r.error_type = "oracle";
    } else {
        r.label = set.proxies[*c.proxy].label;
        r.error_type = std::string(to_string(set.specs[*c.proxy].error_type));
    }
    return r;
}

void simulate_into(CaseResult& result, const PolicyTable& policy, const DemandSampler& sampler,
                   const Uniforms& uniforms, const BenchmarkConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    result.revenues.resize(static_cast<std::size_t>(config.runs));
    for (std::size_t m = 0; m < result.revenues.size(); ++m) {
        result.revenues[m] = simulate_revenue(policy, sampler, uniforms.run(m));
    }
    if (config.dump_trajectories) {
        const auto n = std::min<std::size_t>(static_cast<std::size_t>(config.trajectory_dump_runs),
                                             result.revenues.size());
        for (std::size_t m = 0; m < n; ++m) {
            result.trajectories.push_back(simulate_trajectory(policy, sampler, uniforms.run(m)));
        }
    }
    result.simulate_seconds = seconds_since(start);
}

SolverOptions solver_options(const BenchmarkConfig& config) {
    return SolverOptions{config.poisson_epsilon};
}

// Every case of one scenario x environment cell, oracle first. Failed cases
// are reported in `failures` and left out of the returned list.
std::vector<CaseResult> run_cell(const BenchmarkGrid& grid, std::size_t scenario, std::size_t env,
                                 const BenchmarkConfig& config,
                                 std::vector<std::string>& failures) {
    const auto& set = grid.scenarios[scenario];
    const auto& cell = grid.envs[env];
    std::vector<CaseResult> out;

    std::optional<DemandSampler> sampler;
    Uniforms uniforms;
    try {
        sampler.emplace(set.truth, cell.env);
        uniforms = cell_uniforms(config, set.scenario_id, cell.env_id, cell.env.horizon_t);
    } catch (const std::exception& e) {
        failures.push_back(fmt::format("{}/{}: setup failed: {}", set.scenario_id, cell.env_id, e.what()));
        return out;
    }

    std::optional<PolicyTable> oracle_policy;
    for (std::size_t p = 0; p <= set.proxies.size(); ++p) {
        CaseRef c{scenario, env, p == 0 ? std::nullopt : std::optional<std::size_t>(p - 1)};
        CaseResult result = describe(grid, c);
        try {
            const auto start = std::chrono::steady_clock::now();
            DpSolution sol = solve_dp(grid.profile(c), cell.env, solver_options(config));
            result.solve_seconds = seconds_since(start);
            if (c.is_oracle()) {
                oracle_policy = sol.policy;
            } else if (oracle_policy) {
                result.distinct_from_oracle =
                    !same_on_reachable_states(*oracle_policy, sol.policy, set.truth, cell.env);
            } else {
                result.distinct_from_oracle = true;
            }
            simulate_into(result, sol.policy, *sampler, uniforms, config);
            out.push_back(std::move(result));
        } catch (const std::exception& e) {
            failures.push_back(fmt::format("{}/{}/{}: {}", result.scenario_id, result.label,
                                           result.env_id, e.what()));
        }
    }
    return out;
}

}  // namespace

BenchmarkConfig BenchmarkConfig::full() { return {}; }

BenchmarkConfig BenchmarkConfig::desk() {
    BenchmarkConfig c;
    c.runs = 300;
    c.q_levels = {100, 140, 180};
    c.horizon_t = 40;
    return c;
}

BenchmarkConfig BenchmarkConfig::preset(const std::string& name) {
    if (name == "full") return full();
    if (name == "desk") return desk();
    throw std::invalid_argument(fmt::format("unknown preset '{}' (expected desk or full)", name));
}

std::vector<std::string> validate_config(const BenchmarkConfig& config) {
    std::vector<std::string> errors;
    if (config.eta_levels.empty()) errors.emplace_back("eta_levels is empty");
    if (config.q_levels.empty()) errors.emplace_back("q_levels is empty");
    if (config.deadline_regimes.empty()) errors.emplace_back("deadline_regimes is empty");
    if (config.runs < 1) errors.emplace_back("runs must be at least 1");
    if (config.trajectory_dump_runs < 0) errors.emplace_back("trajectory_dump_runs must be >= 0");
    if (config.threads < 0) errors.emplace_back("threads must be >= 0");
    if (config.target_mass && !(*config.target_mass > 0.0)) {
        errors.emplace_back("target_mass must be positive");
    }
    if (!(config.target_sales_ratio > 0.0)) errors.emplace_back("target_sales_ratio must be positive");
    if (!(config.poisson_epsilon > 0.0 && config.poisson_epsilon < 1.0)) {
        errors.emplace_back("poisson_epsilon must lie in (0, 1)");
    }
    std::set<DeadlineKind> kinds;
    for (const auto& r : config.deadline_regimes) {
        if (!kinds.insert(r.kind).second) {
            errors.push_back(fmt::format("deadline regime {} listed twice", to_string(r.kind)));
        }
    }
    if (std::set<double>(config.eta_levels.begin(), config.eta_levels.end()).size() !=
        config.eta_levels.size()) {
        errors.emplace_back("eta_levels contains duplicates");
    }
    if (std::set<int>(config.q_levels.begin(), config.q_levels.end()).size() != config.q_levels.size()) {
        errors.emplace_back("q_levels contains duplicates");
    }
    // Each axis value must form a valid environment.
    for (double eta : config.eta_levels) {
        for (int q : config.q_levels) {
            for (const auto& r : config.deadline_regimes) {
                Environment env{eta, r, q, config.horizon_t, config.grid};
                for (auto& e : validate_environment(env)) {
                    if (std::find(errors.begin(), errors.end(), e) == errors.end()) errors.push_back(e);
                }
            }
        }
    }
    return errors;
}

double calibrated_target_mass(const BenchmarkConfig& config) {
    if (config.target_mass) return *config.target_mass;
    const double q_mid = median_of(config.q_levels);
    const double eta_mid = median_of(config.eta_levels);
    const double p_mid = median_of(config.grid.levels);
    return config.target_sales_ratio * q_mid / price_response(p_mid, eta_mid);
}

json to_json(const BenchmarkConfig& c) {
    json regimes = json::array();
    for (const auto& r : c.deadline_regimes) regimes.push_back(regime_to_json(r));
    json j{{"eta_levels", c.eta_levels},
           {"q_levels", c.q_levels},
           {"deadline_regimes", regimes},
           {"runs", c.runs},
           {"master_seed", c.master_seed},
           {"horizon_t", c.horizon_t},
           {"price_grid", c.grid.levels},
           {"target_sales_ratio", c.target_sales_ratio},
           {"manifest_path", c.manifest_path},
           {"output_dir", c.output_dir},
           {"scenarios", c.scenarios},
           {"dump_trajectories", c.dump_trajectories},
           {"trajectory_dump_runs", c.trajectory_dump_runs},
           {"poisson_epsilon", c.poisson_epsilon}};
    j["target_mass"] = c.target_mass ? json(*c.target_mass) : json(nullptr);
    return j;
}

BenchmarkConfig config_from_json(const json& j, BenchmarkConfig c) {
    if (j.contains("preset")) c = BenchmarkConfig::preset(j.at("preset").get<std::string>());
    if (j.contains("eta_levels")) c.eta_levels = j.at("eta_levels").get<std::vector<double>>();
    if (j.contains("q_levels")) c.q_levels = j.at("q_levels").get<std::vector<int>>();
    if (j.contains("deadline_regimes")) {
        c.deadline_regimes.clear();
        for (const auto& r : j.at("deadline_regimes")) c.deadline_regimes.push_back(regime_from_json(r));
    }
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("horizon_t")) c.horizon_t = j.at("horizon_t").get<int>();
    if (j.contains("price_grid")) c.grid.levels = j.at("price_grid").get<std::vector<double>>();
    if (j.contains("target_mass")) {
        const auto& t = j.at("target_mass");
        c.target_mass = t.is_null() ? std::nullopt : std::optional<double>(t.get<double>());
    }
    if (j.contains("target_sales_ratio")) c.target_sales_ratio = j.at("target_sales_ratio").get<double>();
    if (j.contains("manifest_path")) c.manifest_path = j.at("manifest_path").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("scenarios")) c.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    if (j.contains("dump_trajectories")) c.dump_trajectories = j.at("dump_trajectories").get<bool>();
    if (j.contains("trajectory_dump_runs")) {
        c.trajectory_dump_runs = j.at("trajectory_dump_runs").get<int>();
    }
    if (j.contains("poisson_epsilon")) c.poisson_epsilon = j.at("poisson_epsilon").get<double>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    return c;
}

BenchmarkConfig load_config(const std::filesystem::path& path, BenchmarkConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open config {}", path.string()));
    return config_from_json(json::parse(in), std::move(base));
}

ScenarioManifest resolve_manifest(const BenchmarkConfig& config) {
    ScenarioManifest m = config.manifest_path.empty() ? default_manifest(config.horizon_t)
                                                      : load_manifest(config.manifest_path);
    if (m.horizon_t != config.horizon_t) {
        throw std::invalid_argument(fmt::format("manifest horizon {} differs from config horizon {}",
                                                m.horizon_t, config.horizon_t));
    }
    return m;
}

std::string make_env_id(double eta, DeadlineKind regime, int inventory_q) {
    return fmt::format("eta{}_{}_Q{}", eta, to_string(regime), inventory_q);
}

std::size_t BenchmarkGrid::oracle_case_count() const {
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [](const CaseRef& c) { return c.is_oracle(); }));
}

std::size_t BenchmarkGrid::proxy_case_count() const { return cases.size() - oracle_case_count(); }

const DemandProfile& BenchmarkGrid::profile(const CaseRef& c) const {
    const auto& set = scenarios.at(c.scenario);
    return c.is_oracle() ? set.truth : set.proxies.at(*c.proxy);
}

BenchmarkGrid expand_grid(const BenchmarkConfig& config, const ScenarioManifest& manifest) {
    if (auto errors = validate_config(config); !errors.empty()) {
        throw std::invalid_argument(fmt::format("invalid config: {}", fmt::join(errors, "; ")));
    }
    if (manifest.horizon_t != config.horizon_t) {
        throw std::invalid_argument("manifest horizon does not match config horizon");
    }
    const double mass = calibrated_target_mass(config);

    BenchmarkGrid grid;
    for (const auto& entry : manifest.scenarios) {
        const auto& id = entry.spec.scenario_id;
        if (!config.scenarios.empty() &&
            std::find(config.scenarios.begin(), config.scenarios.end(), id) == config.scenarios.end()) {
            continue;
        }
        ProfileSet set;
        set.scenario_id = id;
        set.truth = build_scenario(entry.spec, config.horizon_t, mass);
        set.specs = entry.proxies;
        for (std::size_t p = 0; p < entry.proxies.size(); ++p) {
            DemandProfile proxy =
                apply_misspecification(entry.spec, entry.proxies[p], config.horizon_t, mass);
            proxy.label = proxy_label(entry.proxies[p], p + 1);
            set.proxies.push_back(std::move(proxy));
        }
        grid.scenarios.push_back(std::move(set));
    }
    for (const auto& id : config.scenarios) {
        const bool known = std::any_of(grid.scenarios.begin(), grid.scenarios.end(),
                                       [&](const ProfileSet& s) { return s.scenario_id == id; });
        if (!known) throw std::invalid_argument(fmt::format("scenario '{}' not in manifest", id));
    }
    if (grid.scenarios.empty()) throw std::invalid_argument("no scenarios selected");

    for (double eta : config.eta_levels) {
        for (const auto& regime : config.deadline_regimes) {
            for (int q : config.q_levels) {
                Environment env{eta, regime, q, config.horizon_t, config.grid};
                grid.envs.push_back({make_env_id(eta, regime.kind, q), std::move(env)});
            }
        }
    }
    std::sort(grid.envs.begin(), grid.envs.end(), [](const EnvCell& a, const EnvCell& b) {
        return std::tuple(a.env.eta, a.env.deadline.kind, a.env.inventory_q) <
               std::tuple(b.env.eta, b.env.deadline.kind, b.env.inventory_q);
    });

    for (std::size_t s = 0; s < grid.scenarios.size(); ++s) {
        for (std::size_t e = 0; e < grid.envs.size(); ++e) {
            grid.cases.push_back({s, e, std::nullopt});
            for (std::size_t p = 0; p < grid.scenarios[s].proxies.size(); ++p) {
                grid.cases.push_back({s, e, p});
            }
        }
    }
    return grid;
}

CaseResult run_case(const BenchmarkGrid& grid, const CaseRef& c, const BenchmarkConfig& config,
                    const PolicyTable* oracle_policy) {
    const auto& set = grid.scenarios.at(c.scenario);
    const auto& cell = grid.envs.at(c.env);
    CaseResult result = describe(grid, c);

    const auto start = std::chrono::steady_clock::now();
    DpSolution sol = solve_dp(grid.profile(c), cell.env, solver_options(config));
    result.solve_seconds = seconds_since(start);

    if (!c.is_oracle()) {
        std::optional<DpSolution> oracle;
        if (oracle_policy == nullptr) {
            oracle = solve_dp(set.truth, cell.env, solver_options(config));
            oracle_policy = &oracle->policy;
        }
        result.distinct_from_oracle =
            !same_on_reachable_states(*oracle_policy, sol.policy, set.truth, cell.env);
    }

    const DemandSampler sampler(set.truth, cell.env);
    const Uniforms uniforms = cell_uniforms(config, set.scenario_id, cell.env_id, cell.env.horizon_t);
    simulate_into(result, sol.policy, sampler, uniforms, config);
    return result;
}

ResultsStore run_benchmark(const BenchmarkConfig& config, const ScenarioManifest& manifest,
                           const ProgressFn& progress) {
    const BenchmarkGrid grid = expand_grid(config, manifest);
    const std::size_t num_envs = grid.envs.size();
    const std::size_t num_cells = grid.scenarios.size() * num_envs;

    std::vector<std::vector<CaseResult>> cell_results(num_cells);
    std::vector<std::vector<std::string>> cell_failures(num_cells);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        for (std::size_t cell = next++; cell < num_cells; cell = next++) {
            cell_results[cell] =
                run_cell(grid, cell / num_envs, cell % num_envs, config, cell_failures[cell]);
            const std::size_t finished = ++done;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, num_cells);
            }
        }
    };

    std::size_t threads = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, num_cells);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }

    ResultsStore store;
    for (std::size_t cell = 0; cell < num_cells; ++cell) {
        for (auto& r : cell_results[cell]) store.cases.push_back(std::move(r));
        for (auto& f : cell_failures[cell]) store.failures.push_back(std::move(f));
    }
    return store;
}

}  // namespace ticketdp
