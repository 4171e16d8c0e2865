#include "ticketdp/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace ticketdp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array<std::string_view, kErrorTypeCount> kErrorNames = {
    "PeakTiming",   "PeakHeight",       "OmittedPeak",         "Oversmoothing",     "PlateauLevel",
    "SlopeError",   "LateGrowthTiming", "LateGrowthMagnitude", "OmittedLateGrowth",
};

bool is_late_growth(const ShapeComponent& c) {
    return std::holds_alternative<LogisticRamp>(c) || std::holds_alternative<FinalRamp>(c);
}

}  // namespace

std::string_view component_kind(const ShapeComponent& c) {
    return std::visit(overloaded{
                          [](const Peak&) { return std::string_view{"Peak"}; },
                          [](const Plateau&) { return std::string_view{"Plateau"}; },
                          [](const LogisticRamp&) { return std::string_view{"LogisticRamp"}; },
                          [](const ExpDecay&) { return std::string_view{"ExpDecay"}; },
                          [](const FinalRamp&) { return std::string_view{"FinalRamp"}; },
                      },
                      c);
}

std::vector<std::string> component_violations(const ShapeComponent& c) {
    std::vector<std::string> out;
    auto require = [&out](bool ok, const char* msg) {
        if (!ok) out.emplace_back(msg);
    };
    std::visit(overloaded{
                   [&](const Peak& p) {
                       require(p.width > 0.0, "Peak width must be positive");
                       require(p.height >= 0.0, "Peak height must be non-negative");
                   },
                   [&](const Plateau& p) {
                       require(p.level >= 0.0, "Plateau level must be non-negative");
                       require(p.end >= p.start, "Plateau end must not precede start");
                   },
                   [&](const LogisticRamp& r) {
                       require(r.steepness > 0.0, "LogisticRamp steepness must be positive");
                       require(r.asymptote >= 0.0, "LogisticRamp asymptote must be non-negative");
                   },
                   [&](const ExpDecay& d) {
                       require(d.rate > 0.0, "ExpDecay rate must be positive");
                       require(d.initial >= 0.0, "ExpDecay initial must be non-negative");
                   },
                   [&](const FinalRamp& r) {
                       require(r.end_height >= 0.0, "FinalRamp end_height must be non-negative");
                       require(std::isfinite(r.start), "FinalRamp start must be finite");
                   },
               },
               c);
    return out;
}

double eval_component(const ShapeComponent& c, int t, int horizon_t) {
    const double x = t;
    return std::visit(
        overloaded{
            [x](const Peak& p) {
                const double z = (x - p.center) / p.width;
                return p.height * std::exp(-0.5 * z * z);
            },
            [x](const Plateau& p) { return (x >= p.start && x <= p.end) ? p.level : 0.0; },
            [x](const LogisticRamp& r) {
                return r.asymptote / (1.0 + std::exp(-r.steepness * (x - r.midpoint)));
            },
            [x](const ExpDecay& d) {
                return x >= d.start ? d.initial * std::exp(-d.rate * (x - d.start)) : 0.0;
            },
            [x, horizon_t](const FinalRamp& r) {
                if (x < r.start) return 0.0;
                const double span = horizon_t - r.start;
                if (span <= 0.0) return r.end_height;
                return r.end_height * (x - r.start) / span;
            },
        },
        c);
}

std::string_view to_string(ErrorType e) { return kErrorNames.at(static_cast<std::size_t>(e)); }

ErrorType parse_error_type(std::string_view name) {
    for (std::size_t i = 0; i < kErrorNames.size(); ++i) {
        if (kErrorNames[i] == name) return static_cast<ErrorType>(i);
    }
    throw std::invalid_argument(fmt::format("unknown error type '{}'", name));
}

bool is_applicable(ErrorType e, const ShapeComponent& c) {
    switch (e) {
        case ErrorType::PeakTiming:
        case ErrorType::PeakHeight:
        case ErrorType::OmittedPeak:
        case ErrorType::Oversmoothing: return std::holds_alternative<Peak>(c);
        case ErrorType::PlateauLevel: return std::holds_alternative<Plateau>(c);
        case ErrorType::SlopeError:
            return std::holds_alternative<LogisticRamp>(c) || std::holds_alternative<ExpDecay>(c);
        case ErrorType::LateGrowthTiming:
        case ErrorType::LateGrowthMagnitude:
        case ErrorType::OmittedLateGrowth: return is_late_growth(c);
    }
    return false;
}

std::vector<double> raw_profile(const ScenarioSpec& spec, int horizon_t) {
    if (horizon_t < 0) throw std::invalid_argument("raw_profile: negative horizon");
    if (!(spec.base_level >= 0.0)) {
        throw std::invalid_argument(
            fmt::format("scenario {}: base_level must be non-negative", spec.scenario_id));
    }
    for (const auto& c : spec.components) {
        if (auto errs = component_violations(c); !errs.empty()) {
            throw std::invalid_argument(
                fmt::format("scenario {}: {}", spec.scenario_id, fmt::join(errs, "; ")));
        }
    }
    std::vector<double> values(static_cast<std::size_t>(horizon_t) + 1, spec.base_level);
    for (int t = 0; t <= horizon_t; ++t) {
        for (const auto& c : spec.components) {
            values[static_cast<std::size_t>(t)] += eval_component(c, t, horizon_t);
        }
    }
    return values;
}

double total_mass(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

double total_mass(const DemandProfile& profile) { return total_mass(profile.values); }

DemandProfile normalize_to_mass(DemandProfile profile, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("normalize_to_mass: target must be positive");
    const double mass = total_mass(profile);
    if (!(mass > 0.0)) {
        throw std::invalid_argument(
            fmt::format("normalize_to_mass: profile '{}' has zero mass", profile.label));
    }
    if (mass == target) return profile;
    const double scale = target / mass;
    for (auto& v : profile.values) v *= scale;
    return profile;
}

DemandProfile build_scenario(const ScenarioSpec& spec, int horizon_t, double target_mass) {
    DemandProfile profile{raw_profile(spec, horizon_t), spec.scenario_id, true};
    if (!(total_mass(profile) > 0.0)) {
        throw std::invalid_argument(
            fmt::format("scenario {} builds an all-zero profile", spec.scenario_id));
    }
    return normalize_to_mass(std::move(profile), target_mass);
}

ScenarioSpec perturb(const ScenarioSpec& spec, const MisspecSpec& m, int horizon_t) {
    if (m.target_component >= spec.components.size()) {
        throw std::invalid_argument(fmt::format("{}: target component {} out of range",
                                                spec.scenario_id, m.target_component));
    }
    const auto& target = spec.components[m.target_component];
    if (!is_applicable(m.error_type, target)) {
        throw std::invalid_argument(fmt::format("{}: {} is not applicable to a {} component",
                                                spec.scenario_id, to_string(m.error_type),
                                                component_kind(target)));
    }
    const double scale = 1.0 + m.magnitude;
    const bool scales = m.error_type == ErrorType::PeakHeight ||
                        m.error_type == ErrorType::Oversmoothing ||
                        m.error_type == ErrorType::PlateauLevel ||
                        m.error_type == ErrorType::SlopeError ||
                        m.error_type == ErrorType::LateGrowthMagnitude;
    if (scales && !(scale > 0.0)) {
        throw std::invalid_argument(
            fmt::format("{}: magnitude {} gives a non-positive scale", spec.scenario_id, m.magnitude));
    }

    ScenarioSpec out = spec;
    auto& c = out.components[m.target_component];

    switch (m.error_type) {
        case ErrorType::PeakTiming: {
            auto& p = std::get<Peak>(c);
            p.center += m.magnitude * p.width;
            break;
        }
        case ErrorType::PeakHeight: std::get<Peak>(c).height *= scale; break;
        case ErrorType::Oversmoothing: {
            // Spread the same area over a wider bump.
            auto& p = std::get<Peak>(c);
            p.width *= scale;
            p.height /= scale;
            break;
        }
        case ErrorType::PlateauLevel: std::get<Plateau>(c).level *= scale; break;
        case ErrorType::SlopeError:
            if (auto* r = std::get_if<LogisticRamp>(&c)) {
                r->steepness *= scale;
            } else {
                std::get<ExpDecay>(c).rate *= scale;
            }
            break;
        case ErrorType::LateGrowthTiming:
            if (auto* r = std::get_if<LogisticRamp>(&c)) {
                r->midpoint += m.magnitude * 2.0 / r->steepness;
            } else {
                auto& f = std::get<FinalRamp>(c);
                f.start += m.magnitude * 0.5 * (horizon_t - f.start);
                f.start = std::min(f.start, static_cast<double>(horizon_t - 1));
            }
            break;
        case ErrorType::LateGrowthMagnitude:
            if (auto* r = std::get_if<LogisticRamp>(&c)) {
                r->asymptote *= scale;
            } else {
                std::get<FinalRamp>(c).end_height *= scale;
            }
            break;
        case ErrorType::OmittedPeak:
        case ErrorType::OmittedLateGrowth: {
            if (!(m.magnitude >= 0.0 && m.magnitude <= 1.0)) {
                throw std::invalid_argument(fmt::format(
                    "{}: omission magnitude must lie in [0, 1]", spec.scenario_id));
            }
            if (m.magnitude == 1.0) {
                out.components.erase(out.components.begin() +
                                     static_cast<std::ptrdiff_t>(m.target_component));
                break;
            }
            const double keep = 1.0 - m.magnitude;
            std::visit(overloaded{
                           [keep](Peak& p) { p.height *= keep; },
                           [keep](LogisticRamp& r) { r.asymptote *= keep; },
                           [keep](FinalRamp& r) { r.end_height *= keep; },
                           [](auto&) {},
                       },
                       c);
            break;
        }
    }
    return out;
}

std::string proxy_label(const MisspecSpec& m, std::size_t ordinal) {
    return fmt::format("{}-{}", to_string(m.error_type), ordinal);
}

DemandProfile apply_misspecification(const ScenarioSpec& spec, const MisspecSpec& m,
                                     int horizon_t, double target_mass) {
    const ScenarioSpec perturbed = perturb(spec, m, horizon_t);
    DemandProfile proxy{raw_profile(perturbed, horizon_t), std::string(to_string(m.error_type)), false};
    if (!(total_mass(proxy) > 0.0)) {
        throw std::invalid_argument(fmt::format("{}: {} yields a zero-mass proxy",
                                                spec.scenario_id, to_string(m.error_type)));
    }
    return normalize_to_mass(std::move(proxy), target_mass);
}

double final_decile_share(const DemandProfile& profile) {
    const int horizon = profile.horizon();
    const double cutoff = 0.9 * horizon;
    double late = 0.0;
    for (int t = 0; t <= horizon; ++t) {
        if (t > cutoff) late += profile.values[static_cast<std::size_t>(t)];
    }
    return late / total_mass(profile);
}

}  // namespace ticketdp
