#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ticketdp/demand.hpp"
#include "ticketdp/poisson.hpp"

namespace ticketdp {

/// Optimal expected revenue-to-go V(t, x, i) for t = 0..T+1, x = 0..Q and
/// zero-based last-price index i. Row T+1 is identically zero.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(int horizon_t, int inventory_q, std::size_t num_prices);

    int horizon() const { return horizon_t_; }
    int inventory() const { return inventory_q_; }
    std::size_t num_prices() const { return num_prices_; }

    double operator()(int t, int x, std::size_t i) const { return data_[index(t, x, i)]; }
    double& at(int t, int x, std::size_t i) { return data_[index(t, x, i)]; }

private:
    std::size_t index(int t, int x, std::size_t i) const {
        return (static_cast<std::size_t>(t) * (static_cast<std::size_t>(inventory_q_) + 1) +
                static_cast<std::size_t>(x)) *
                   num_prices_ +
               i;
    }

    int horizon_t_ = 0;
    int inventory_q_ = 0;
    std::size_t num_prices_ = 0;
    std::vector<double> data_;
};

/// Feedback rule k*(t, x, i) >= i for t = 0..T.
class PolicyTable {
public:
    PolicyTable() = default;
    PolicyTable(int horizon_t, int inventory_q, std::size_t num_prices);

    int horizon() const { return horizon_t_; }
    int inventory() const { return inventory_q_; }
    std::size_t num_prices() const { return num_prices_; }

    std::size_t operator()(int t, int x, std::size_t i) const { return action_[index(t, x, i)]; }
    void set(int t, int x, std::size_t i, std::size_t k) {
        action_[index(t, x, i)] = static_cast<std::uint16_t>(k);
    }

    bool contains(int t, int x, std::size_t i) const {
        return t >= 0 && t <= horizon_t_ && x >= 0 && x <= inventory_q_ && i < num_prices_;
    }

    /// Label of the profile the policy was solved on, and whether it was
    /// the true profile.
    std::string provenance;
    bool solved_on_oracle = false;

    bool same_actions(const PolicyTable& other) const { return action_ == other.action_; }

private:
    std::size_t index(int t, int x, std::size_t i) const {
        return (static_cast<std::size_t>(t) * (static_cast<std::size_t>(inventory_q_) + 1) +
                static_cast<std::size_t>(x)) *
                   num_prices_ +
               i;
    }

    int horizon_t_ = 0;
    int inventory_q_ = 0;
    std::size_t num_prices_ = 0;
    std::vector<std::uint16_t> action_;
};

struct SolverOptions {
    double poisson_epsilon = kDefaultPoissonEpsilon;
};

struct DpSolution {
    ValueTable values;
    PolicyTable policy;

    double initial_value() const { return values(0, values.inventory(), 0); }
};

/// Backward induction over (period, inventory, last price index).
///
/// For each state the admissible actions are the indices k >= i. Ties
/// between actions go to the lowest k. Per-(t, k) Poisson tables are built
/// once and shared by every x and i.
DpSolution solve_dp(const DemandProfile& profile, const Environment& env,
                    const SolverOptions& options = {});

/// Throws std::out_of_range for a state outside the table.
std::size_t policy_action(const PolicyTable& policy, int t, int x, std::size_t i);

/// True when both policies choose the same action at every state reachable
/// from (0, Q, 0) under `reference` with demand `true_profile`. Policies
/// that agree there produce identical trajectories for every demand draw.
bool same_on_reachable_states(const PolicyTable& reference, const PolicyTable& other,
                              const DemandProfile& true_profile, const Environment& env);

/// CSV dump "t,x,i,k" preceded by provenance comment lines.
void save_policy(const PolicyTable& policy, const std::filesystem::path& path);

}  // namespace ticketdp
