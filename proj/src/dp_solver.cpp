#include "ticketdp/dp_solver.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/os.h>

namespace ticketdp {

ValueTable::ValueTable(int horizon_t, int inventory_q, std::size_t num_prices)
    : horizon_t_(horizon_t),
      inventory_q_(inventory_q),
      num_prices_(num_prices),
      data_(static_cast<std::size_t>(horizon_t + 2) * static_cast<std::size_t>(inventory_q + 1) *
                num_prices,
            0.0) {}

PolicyTable::PolicyTable(int horizon_t, int inventory_q, std::size_t num_prices)
    : horizon_t_(horizon_t),
      inventory_q_(inventory_q),
      num_prices_(num_prices),
      action_(static_cast<std::size_t>(horizon_t + 1) * static_cast<std::size_t>(inventory_q + 1) *
                  num_prices,
              0) {}

DpSolution solve_dp(const DemandProfile& profile, const Environment& env,
                    const SolverOptions& options) {
    require_solvable(env);
    require_compatible(profile, env);

    const int horizon = env.horizon_t;
    const int q = env.inventory_q;
    const std::size_t num_prices = env.grid.size();
    const auto width = static_cast<std::size_t>(q) + 1;

    DpSolution sol{ValueTable(horizon, q, num_prices), PolicyTable(horizon, q, num_prices)};
    sol.policy.provenance = profile.label;
    sol.policy.solved_on_oracle = profile.is_oracle;

    // action_value[k * width + x]: expected revenue of posting price k at
    // (t, x) and following the optimal policy afterwards.
    std::vector<double> action_value(num_prices * width);
    std::vector<double> next_value(width);
    std::vector<double> tail;

    for (int t = horizon; t >= 0; --t) {
        for (std::size_t k = 0; k < num_prices; ++k) {
            const double price = env.grid.levels[k];
            const PoissonTable table =
                truncated_poisson_pmf(intensity_at(t, k, profile, env), options.poisson_epsilon);
            const auto& pmf = table.pmf;
            const std::size_t n_max = table.n_max();

            // tail[n] = P(N >= n), summed from the top.
            tail.assign(n_max + 2, 0.0);
            for (std::size_t n = n_max + 1; n-- > 0;) tail[n] = tail[n + 1] + pmf[n];

            for (std::size_t x = 0; x < width; ++x) next_value[x] = sol.values(t + 1, static_cast<int>(x), k);

            double* out = action_value.data() + k * width;
            for (std::size_t x = 0; x < width; ++x) {
                const std::size_t uncapped = std::min(x, n_max + 1);
                double sum = 0.0;
                for (std::size_t n = 0; n < uncapped; ++n) {
                    sum += pmf[n] * (price * static_cast<double>(n) + next_value[x - n]);
                }
                // Sell-out: every n >= x leaves zero stock, worth nothing.
                if (x <= n_max) sum += tail[x] * (price * static_cast<double>(x) + next_value[0]);
                out[x] = sum;
            }
        }

        for (std::size_t x = 0; x < width; ++x) {
            double best = action_value[(num_prices - 1) * width + x];
            std::size_t best_k = num_prices - 1;
            for (std::size_t i = num_prices; i-- > 0;) {
                const double candidate = action_value[i * width + x];
                if (candidate >= best) {
                    best = candidate;
                    best_k = i;
                }
                sol.values.at(t, static_cast<int>(x), i) = best;
                sol.policy.set(t, static_cast<int>(x), i, best_k);
            }
        }
    }
    return sol;
}

std::size_t policy_action(const PolicyTable& policy, int t, int x, std::size_t i) {
    if (!policy.contains(t, x, i)) {
        throw std::out_of_range(fmt::format("policy_action: state (t={}, x={}, i={}) out of range",
                                            t, x, i));
    }
    return policy(t, x, i);
}

bool same_on_reachable_states(const PolicyTable& reference, const PolicyTable& other,
                              const DemandProfile& true_profile, const Environment& env) {
    if (reference.horizon() != other.horizon() || reference.inventory() != other.inventory() ||
        reference.num_prices() != other.num_prices()) {
        return false;
    }
    require_compatible(true_profile, env);
    const int q = reference.inventory();
    const std::size_t num_prices = reference.num_prices();
    const auto width = static_cast<std::size_t>(q) + 1;

    // reachable[i * width + x] for the current period.
    std::vector<char> reachable(num_prices * width, 0);
    std::vector<char> next(num_prices * width, 0);
    reachable[static_cast<std::size_t>(q)] = 1;

    for (int t = 0; t <= reference.horizon(); ++t) {
        std::fill(next.begin(), next.end(), 0);
        // With positive demand every lower stock level is reachable, so
        // tracking the highest source stock per action is enough.
        std::vector<int> highest(num_prices, -1);
        const bool any_demand = true_profile.values[static_cast<std::size_t>(t)] > 0.0;
        for (std::size_t i = 0; i < num_prices; ++i) {
            for (int x = 0; x <= q; ++x) {
                if (!reachable[i * width + static_cast<std::size_t>(x)]) continue;
                const std::size_t k = reference(t, x, i);
                if (other(t, x, i) != k) return false;
                if (any_demand && x > 0) {
                    highest[k] = std::max(highest[k], x);
                } else {
                    next[k * width + static_cast<std::size_t>(x)] = 1;
                }
            }
        }
        for (std::size_t k = 0; k < num_prices; ++k) {
            for (int x = 0; x <= highest[k]; ++x) next[k * width + static_cast<std::size_t>(x)] = 1;
        }
        std::swap(reachable, next);
    }
    return true;
}

void save_policy(const PolicyTable& policy, const std::filesystem::path& path) {
    auto out = fmt::output_file(path.string());
    out.print("# provenance={}\n# oracle={}\n", policy.provenance, policy.solved_on_oracle);
    out.print("t,x,i,k\n");
    for (int t = 0; t <= policy.horizon(); ++t) {
        for (int x = 0; x <= policy.inventory(); ++x) {
            for (std::size_t i = 0; i < policy.num_prices(); ++i) {
                out.print("{},{},{},{}\n", t, x, i, policy(t, x, i));
            }
        }
    }
}

}  // namespace ticketdp
