#include "ticketdp/demand.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace ticketdp {

std::optional<std::size_t> PriceGrid::index_of(double p) const {
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] == p) return k;
    }
    return std::nullopt;
}

PriceGrid PriceGrid::uniform(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) {
        throw std::invalid_argument("PriceGrid::uniform: need step > 0 and hi >= lo");
    }
    PriceGrid grid;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
    grid.levels.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) grid.levels.push_back(lo + static_cast<double>(k) * step);
    return grid;
}

std::string_view to_string(DeadlineKind kind) {
    switch (kind) {
        case DeadlineKind::Flat: return "Flat";
        case DeadlineKind::Moderate: return "Moderate";
        case DeadlineKind::Strong: return "Strong";
    }
    return "?";
}

DeadlineKind parse_deadline_kind(std::string_view name) {
    if (name == "Flat" || name == "flat") return DeadlineKind::Flat;
    if (name == "Moderate" || name == "moderate") return DeadlineKind::Moderate;
    if (name == "Strong" || name == "strong") return DeadlineKind::Strong;
    throw std::invalid_argument(fmt::format("unknown deadline regime '{}'", name));
}

DeadlineRegime DeadlineRegime::flat() { return {DeadlineKind::Flat, 10, 0.0}; }

DeadlineRegime DeadlineRegime::moderate(int ramp_window, double coeff) {
    return {DeadlineKind::Moderate, ramp_window, coeff};
}

DeadlineRegime DeadlineRegime::strong(int ramp_window, double coeff) {
    return {DeadlineKind::Strong, ramp_window, coeff};
}

double price_response(double price, double eta) {
    if (!(price >= 0.0)) throw std::domain_error("price_response: price must be non-negative");
    if (!(eta > 0.0)) throw std::domain_error("price_response: eta must be positive");
    return std::exp(-eta * price);
}

double deadline_factor(int t, const DeadlineRegime& regime, int horizon_t) {
    if (t < 0 || t > horizon_t) {
        throw std::domain_error(fmt::format("deadline_factor: t={} outside 0..{}", t, horizon_t));
    }
    if (regime.kind == DeadlineKind::Flat) return 1.0;
    const int ramp_start = horizon_t - regime.ramp_window;
    if (t <= ramp_start) return 1.0;
    const double r = static_cast<double>(t - ramp_start) / regime.ramp_window;
    return 1.0 + regime.intensity_coeff * r * r;
}

double intensity_at(int t, std::size_t price_index, const DemandProfile& profile,
                    const Environment& env) {
    if (t < 0 || t > env.horizon_t || t >= static_cast<int>(profile.values.size())) {
        throw std::domain_error(fmt::format("intensity: t={} outside profile range", t));
    }
    if (price_index >= env.grid.size()) {
        throw std::domain_error(fmt::format("intensity: price index {} off grid", price_index));
    }
    const double level = profile.values[static_cast<std::size_t>(t)];
    if (level == 0.0) return 0.0;
    const double phi = deadline_factor(t, env.deadline, env.horizon_t);
    return level * price_response(env.grid.levels[price_index] / phi, env.eta);
}

double intensity(int t, double price, const DemandProfile& profile, const Environment& env) {
    const auto k = env.grid.index_of(price);
    if (!k) throw std::domain_error(fmt::format("intensity: price {} is not on the grid", price));
    return intensity_at(t, *k, profile, env);
}

namespace {

std::vector<std::string> environment_violations(const Environment& env, bool allow_degenerate) {
    std::vector<std::string> errors;
    if (!(env.eta > 0.0)) errors.emplace_back("eta must be positive");
    if (allow_degenerate) {
        if (env.inventory_q < 0) errors.emplace_back("inventory_q must be non-negative");
        if (env.horizon_t < 0) errors.emplace_back("horizon_t must be non-negative");
    } else {
        if (env.inventory_q <= 0) errors.emplace_back("inventory_q must be positive");
        if (env.horizon_t < 1) errors.emplace_back("horizon_t must be at least 1");
    }

    const auto& levels = env.grid.levels;
    if (levels.size() < 2) errors.emplace_back("grid must contain at least 2 levels");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0)) {
            errors.emplace_back("grid levels must be positive");
            break;
        }
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (!(levels[k] > levels[k - 1])) {
            errors.emplace_back("grid not strictly increasing");
            break;
        }
    }

    const auto& d = env.deadline;
    if (d.kind != DeadlineKind::Flat) {
        if (d.ramp_window < 1) errors.emplace_back("deadline.ramp_window must be at least 1");
        if (!(d.intensity_coeff >= 0.0)) {
            errors.emplace_back("deadline.intensity_coeff must be non-negative");
        }
    }
    return errors;
}

void throw_if_any(const std::vector<std::string>& errors) {
    if (errors.empty()) return;
    throw std::invalid_argument(fmt::format("invalid environment: {}", fmt::join(errors, "; ")));
}

}  // namespace

std::vector<std::string> validate_environment(const Environment& env) {
    return environment_violations(env, false);
}

void require_valid(const Environment& env) { throw_if_any(environment_violations(env, false)); }

void require_solvable(const Environment& env) { throw_if_any(environment_violations(env, true)); }

void require_compatible(const DemandProfile& profile, const Environment& env) {
    if (profile.horizon() != env.horizon_t) {
        throw std::invalid_argument(fmt::format(
            "profile '{}' has {} periods, environment expects {}", profile.label,
            profile.values.size(), env.horizon_t + 1));
    }
}

}  // namespace ticketdp
