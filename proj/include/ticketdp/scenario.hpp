#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ticketdp/demand.hpp"

namespace ticketdp {

// Shape primitives for total-demand profiles. Times are in periods,
// heights in arrivals per period.

/// Gaussian bump: height * exp(-(t - center)^2 / (2 width^2)).
struct Peak {
    double center = 0.0;
    double width = 1.0;
    double height = 0.0;
};

/// Boxcar: level on [start, end], zero elsewhere.
struct Plateau {
    double start = 0.0;
    double end = 0.0;
    double level = 0.0;
};

/// asymptote / (1 + exp(-steepness (t - midpoint))).
struct LogisticRamp {
    double midpoint = 0.0;
    double steepness = 1.0;
    double asymptote = 0.0;
};

/// initial * exp(-rate (t - start)) for t >= start, zero before.
struct ExpDecay {
    double start = 0.0;
    double rate = 1.0;
    double initial = 0.0;
};

/// Linear from 0 at `start` to `end_height` at the horizon.
struct FinalRamp {
    double start = 0.0;
    double end_height = 0.0;
};

using ShapeComponent = std::variant<Peak, Plateau, LogisticRamp, ExpDecay, FinalRamp>;

std::string_view component_kind(const ShapeComponent& c);

/// Empty when the component's parameters are admissible.
std::vector<std::string> component_violations(const ShapeComponent& c);

double eval_component(const ShapeComponent& c, int t, int horizon_t);

struct ScenarioSpec {
    std::string scenario_id;
    std::string description;
    std::vector<ShapeComponent> components;
    double base_level = 0.0;
};

enum class ErrorType {
    PeakTiming,
    PeakHeight,
    OmittedPeak,
    Oversmoothing,
    PlateauLevel,
    SlopeError,
    LateGrowthTiming,
    LateGrowthMagnitude,
    OmittedLateGrowth,
};

inline constexpr std::size_t kErrorTypeCount = 9;

std::string_view to_string(ErrorType e);
ErrorType parse_error_type(std::string_view name);

/// One structural perturbation of a scenario component.
///
/// `magnitude` is zero for the null perturbation for every error type:
///   - timing errors shift by magnitude x the component's time scale
///     (Peak: width; LogisticRamp: 2/steepness; FinalRamp: (T - start)/2),
///   - scale errors multiply the targeted parameter by (1 + magnitude),
///   - omissions remove the fraction `magnitude` of the component
///     (1 removes it entirely).
struct MisspecSpec {
    ErrorType error_type = ErrorType::PeakTiming;
    std::size_t target_component = 0;
    double magnitude = 0.0;
};

bool is_applicable(ErrorType e, const ShapeComponent& c);

/// base_level + sum of components, before normalization.
std::vector<double> raw_profile(const ScenarioSpec& spec, int horizon_t);

double total_mass(const DemandProfile& profile);
double total_mass(const std::vector<double>& values);

DemandProfile normalize_to_mass(DemandProfile profile, double target);

/// Oracle profile for `spec`, scaled to `target_mass`.
DemandProfile build_scenario(const ScenarioSpec& spec, int horizon_t, double target_mass);

/// The perturbed component list (untargeted components copied verbatim).
ScenarioSpec perturb(const ScenarioSpec& spec, const MisspecSpec& m, int horizon_t);

/// Proxy profile: perturbed, rebuilt, then scaled to the same target mass
/// as the oracle built from `spec`.
DemandProfile apply_misspecification(const ScenarioSpec& spec, const MisspecSpec& m,
                                     int horizon_t, double target_mass);

std::string proxy_label(const MisspecSpec& m, std::size_t ordinal);

/// Share of mass in periods t > 0.9 T.
double final_decile_share(const DemandProfile& profile);

}  // namespace ticketdp
