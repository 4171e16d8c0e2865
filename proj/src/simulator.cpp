#include "ticketdp/simulator.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace ticketdp {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// SplitMix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_uniforms(std::span<const double> uniforms, int horizon) {
    if (uniforms.size() != static_cast<std::size_t>(horizon) + 1) {
        throw std::invalid_argument(fmt::format("simulate: need {} uniforms, got {}", horizon + 1,
                                                uniforms.size()));
    }
}

void check_policy(const PolicyTable& policy, const Environment& env) {
    if (policy.horizon() != env.horizon_t || policy.inventory() != env.inventory_q ||
        policy.num_prices() != env.grid.size()) {
        throw std::invalid_argument("simulate: policy shape does not match environment");
    }
}

// Shared loop; `record` is called once per period with (k, N, s, x_before).
template <class Draw, class Record>
double run(const PolicyTable& policy, const Environment& env, std::span<const double> uniforms,
           Draw&& draw, Record&& record) {
    int x = env.inventory_q;
    std::size_t i = 0;
    double revenue = 0.0;
    for (int t = 0; t <= env.horizon_t; ++t) {
        const std::size_t k = policy(t, x, i);
        const int n = draw(t, k, uniforms[static_cast<std::size_t>(t)]);
        const int s = std::min(n, x);
        record(k, n, s, x);
        revenue += env.grid.levels[k] * s;
        x -= s;
        i = k;
    }
    return revenue;
}

}  // namespace

std::uint64_t derive_run_seed(const RunKey& key) {
    std::uint64_t h = mix(key.master_seed);
    h = mix(h ^ fnv1a(key.scenario_id));
    h = mix(h ^ fnv1a(key.env_id));
    h = mix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(key.run_index)));
    return h;
}

std::vector<double> uniform_stream(std::uint64_t seed, std::size_t length) {
    if (length == 0) throw std::invalid_argument("uniform_stream: length must be at least 1");
    std::mt19937_64 engine(seed);
    std::vector<double> u(length);
    // Top 53 bits, offset by half a step so 0 and 1 are excluded.
    for (auto& v : u) v = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    return u;
}

DemandSampler::DemandSampler(const DemandProfile& true_profile, const Environment& env)
    : env_(env), num_prices_(env.grid.size()) {
    require_solvable(env);
    require_compatible(true_profile, env);
    samplers_.reserve(static_cast<std::size_t>(env.horizon_t + 1) * num_prices_);
    for (int t = 0; t <= env.horizon_t; ++t) {
        for (std::size_t k = 0; k < num_prices_; ++k) {
            samplers_.emplace_back(intensity_at(t, k, true_profile, env));
        }
    }
}

Trajectory simulate_trajectory(const PolicyTable& policy, const DemandProfile& true_profile,
                               const Environment& env, std::span<const double> uniforms) {
    if (!true_profile.is_oracle) {
        throw std::invalid_argument("simulate_trajectory: demand must come from a true profile");
    }
    require_compatible(true_profile, env);
    check_policy(policy, env);
    check_uniforms(uniforms, env.horizon_t);

    Trajectory traj;
    auto draw = [&](int t, std::size_t k, double u) {
        return poisson_inverse_cdf(intensity_at(t, k, true_profile, env), u);
    };
    auto record = [&](std::size_t k, int n, int s, int x) {
        traj.price_index.push_back(k);
        traj.price.push_back(env.grid.levels[k]);
        traj.demand.push_back(n);
        traj.sales.push_back(s);
        traj.inventory.push_back(x);
    };
    traj.revenue = run(policy, env, uniforms, draw, record);
    traj.inventory.push_back(traj.inventory.back() - traj.sales.back());
    return traj;
}

Trajectory simulate_trajectory(const PolicyTable& policy, const DemandSampler& demand,
                               std::span<const double> uniforms) {
    const auto& env = demand.environment();
    check_policy(policy, env);
    check_uniforms(uniforms, env.horizon_t);

    Trajectory traj;
    auto draw = [&](int t, std::size_t k, double u) { return demand.draw(t, k, u); };
    auto record = [&](std::size_t k, int n, int s, int x) {
        traj.price_index.push_back(k);
        traj.price.push_back(env.grid.levels[k]);
        traj.demand.push_back(n);
        traj.sales.push_back(s);
        traj.inventory.push_back(x);
    };
    traj.revenue = run(policy, env, uniforms, draw, record);
    traj.inventory.push_back(traj.inventory.back() - traj.sales.back());
    return traj;
}

double simulate_revenue(const PolicyTable& policy, const DemandSampler& demand,
                        std::span<const double> uniforms) {
    const auto& env = demand.environment();
    check_policy(policy, env);
    check_uniforms(uniforms, env.horizon_t);
    auto draw = [&](int t, std::size_t k, double u) { return demand.draw(t, k, u); };
    return run(policy, env, uniforms, draw, [](std::size_t, int, int, int) {});
}

}  // namespace ticketdp
