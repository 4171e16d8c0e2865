#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ticketdp/dp_solver.hpp"

using namespace ticketdp;

namespace {

struct Instance {
    DemandProfile profile;
    Environment env;
};

Instance small_instance() {
    Instance in;
    in.profile = {{2.0, 3.0, 2.5, 4.0}, "small", true};
    in.env.eta = 0.01;
    in.env.inventory_q = 4;
    in.env.horizon_t = 3;
    in.env.grid = PriceGrid{{40.0, 80.0, 120.0}};
    in.env.deadline = DeadlineRegime{DeadlineKind::Moderate, 2, 0.5};
    return in;
}

oracle::Model to_model(const Instance& in) {
    oracle::Model m;
    m.demand = in.profile.values;
    m.prices = in.env.grid.levels;
    m.eta = in.env.eta;
    m.q = in.env.inventory_q;
    m.ramp = in.env.deadline.kind != DeadlineKind::Flat;
    m.window = in.env.deadline.ramp_window;
    m.coeff = in.env.deadline.intensity_coeff;
    return m;
}

}  // namespace

TEST(SolveDp, SinglePeriodPicksRevenueMaximizingPrice) {
    Environment env;
    env.eta = 0.01;
    env.horizon_t = 0;
    env.inventory_q = 1000000;
    env.grid = PriceGrid{{50.0, 100.0}};
    const DemandProfile profile{{10.0}, "one", true};
    const auto sol = solve_dp(profile, env);
    const double low = 50.0 * 10.0 * std::exp(-0.5);
    const double high = 100.0 * 10.0 * std::exp(-1.0);
    EXPECT_NEAR(low, 303.265329856, 1e-6);
    EXPECT_NEAR(sol.initial_value(), std::max(low, high), 1e-9);
    EXPECT_NEAR(sol.initial_value(), 367.879441171, 1e-6);
    EXPECT_EQ(policy_action(sol.policy, 0, env.inventory_q, 0), 1u);
}

TEST(SolveDp, ZeroInventoryIsWorthNothing) {
    auto in = small_instance();
    in.env.inventory_q = 0;
    const auto sol = solve_dp(in.profile, in.env);
    for (int t = 0; t <= in.env.horizon_t + 1; ++t) {
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sol.values(t, 0, i), 0.0);
    }
    for (int t = 0; t <= in.env.horizon_t; ++t) {
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(policy_action(sol.policy, t, 0, i), i);
    }
}

TEST(SolveDp, TopPriceIsAbsorbing) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    for (int t = 0; t <= in.env.horizon_t; ++t) {
        for (int x = 0; x <= in.env.inventory_q; ++x) EXPECT_EQ(sol.policy(t, x, 2), 2u);
    }
}

TEST(SolveDp, TerminalAndBoundaryConditions) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    for (int x = 0; x <= in.env.inventory_q; ++x) {
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sol.values(in.env.horizon_t + 1, x, i), 0.0);
    }
}

TEST(SolveDp, MatchesBruteForceOnEveryState) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    const auto V = oracle::brute_force_values(to_model(in));
    for (int t = 0; t <= in.env.horizon_t; ++t) {
        for (int x = 0; x <= in.env.inventory_q; ++x) {
            for (std::size_t i = 0; i < 3; ++i) {
                const double expect = V[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)][i];
                EXPECT_NEAR(sol.values(t, x, i), expect, 1e-9 * std::max(1.0, expect))
                    << t << "," << x << "," << i;
            }
        }
    }
}

TEST(SolveDp, ActionsAreMonotone) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    for (int t = 0; t <= in.env.horizon_t; ++t) {
        for (int x = 0; x <= in.env.inventory_q; ++x) {
            for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(sol.policy(t, x, i), i);
        }
    }
}

TEST(SolveDp, ProvenanceRecorded) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    EXPECT_EQ(sol.policy.provenance, "small");
    EXPECT_TRUE(sol.policy.solved_on_oracle);
}

TEST(SolveDp, LengthMismatchThrows) {
    auto in = small_instance();
    in.profile.values.push_back(1.0);
    EXPECT_THROW(solve_dp(in.profile, in.env), std::invalid_argument);
}

TEST(PolicyAction, RangeChecked) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    EXPECT_THROW(policy_action(sol.policy, 4, 0, 0), std::out_of_range);
    EXPECT_THROW(policy_action(sol.policy, 0, 5, 0), std::out_of_range);
    EXPECT_THROW(policy_action(sol.policy, 0, 0, 3), std::out_of_range);
    EXPECT_THROW(policy_action(sol.policy, -1, 0, 0), std::out_of_range);
}

TEST(SameOnReachableStates, IdenticalAndDifferentPolicies) {
    const auto in = small_instance();
    const auto a = solve_dp(in.profile, in.env);
    EXPECT_TRUE(same_on_reachable_states(a.policy, a.policy, in.profile, in.env));

    // A policy that always jumps to the top price differs at t = 0.
    PolicyTable top = a.policy;
    for (int t = 0; t <= in.env.horizon_t; ++t) {
        for (int x = 0; x <= in.env.inventory_q; ++x) {
            for (std::size_t i = 0; i < 3; ++i) top.set(t, x, i, 2);
        }
    }
    if (a.policy(0, in.env.inventory_q, 0) != 2) {
        EXPECT_FALSE(same_on_reachable_states(a.policy, top, in.profile, in.env));
    }

    // Changing an unreachable state (top price index at t = 0) is ignored.
    PolicyTable tweak = a.policy;
    tweak.set(0, in.env.inventory_q, 1, 2);
    EXPECT_TRUE(same_on_reachable_states(a.policy, tweak, in.profile, in.env));
}

TEST(SavePolicy, WritesHeaderAndAllStates) {
    const auto in = small_instance();
    const auto sol = solve_dp(in.profile, in.env);
    const auto path = std::filesystem::temp_directory_path() / "ticketdp_policy.csv";
    save_policy(sol.policy, path);
    std::ifstream f(path);
    std::string line;
    std::getline(f, line);
    EXPECT_EQ(line, "# provenance=small");
    std::size_t rows = 0;
    while (std::getline(f, line)) ++rows;
    EXPECT_EQ(rows, 2u + 4u * 5u * 3u);  // oracle flag, column header, states
    std::filesystem::remove(path);
}
