#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ticketdp/demand.hpp"
#include "ticketdp/dp_solver.hpp"
#include "ticketdp/poisson.hpp"

namespace ticketdp {

/// Identifies one simulation run. The policy is deliberately not part of
/// the key: every policy evaluated on the same key sees the same uniforms.
struct RunKey {
    std::uint64_t master_seed = 0;
    std::string scenario_id;
    std::string env_id;
    int run_index = 1;
};

std::uint64_t derive_run_seed(const RunKey& key);

/// One uniform in (0, 1) per period, reproducible from the seed.
std::vector<double> uniform_stream(std::uint64_t seed, std::size_t length);

struct Trajectory {
    std::vector<std::size_t> price_index;  // per period t = 0..T
    std::vector<double> price;
    std::vector<int> demand;
    std::vector<int> sales;
    std::vector<int> inventory;  // x(0..T+1)
    double revenue = 0.0;
};

/// Inverse-CDF samplers for every (period, price) under one demand profile
/// and environment, built once and shared by all policies in a cell.
class DemandSampler {
public:
    DemandSampler(const DemandProfile& true_profile, const Environment& env);

    int draw(int t, std::size_t k, double u) const {
        return samplers_[static_cast<std::size_t>(t) * num_prices_ + k].draw(u);
    }
    const Environment& environment() const { return env_; }

private:
    Environment env_;
    std::size_t num_prices_;
    std::vector<PoissonSampler> samplers_;
};

/// Runs the feedback policy against the true demand: starts at x(0) = Q on
/// the lowest price, draws N(t) by inverse CDF from uniforms[t] and sells
/// min(N(t), x(t)).
Trajectory simulate_trajectory(const PolicyTable& policy, const DemandProfile& true_profile,
                               const Environment& env, std::span<const double> uniforms);

/// Same path as above using cached samplers.
Trajectory simulate_trajectory(const PolicyTable& policy, const DemandSampler& demand,
                               std::span<const double> uniforms);

/// Revenue only; identical to simulate_trajectory(...).revenue.
double simulate_revenue(const PolicyTable& policy, const DemandSampler& demand,
                        std::span<const double> uniforms);

}  // namespace ticketdp
