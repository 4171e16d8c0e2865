#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ticketdp {

/// Admissible ticket prices, strictly increasing.
///
/// Price indices are zero-based throughout the library: index 0 is the
/// lowest price and `size() - 1` the highest.
struct PriceGrid {
    std::vector<double> levels;

    std::size_t size() const { return levels.size(); }
    double price(std::size_t k) const { return levels.at(k); }
    double min_price() const { return levels.front(); }
    double max_price() const { return levels.back(); }

    /// Exact lookup; policy prices are always taken from the grid so no
    /// tolerance is applied.
    std::optional<std::size_t> index_of(double p) const;

    /// lo, lo+step, ..., hi (inclusive, hi reached within step/2).
    static PriceGrid uniform(double lo, double hi, double step);

    bool operator==(const PriceGrid&) const = default;
};

enum class DeadlineKind { Flat, Moderate, Strong };

std::string_view to_string(DeadlineKind kind);
DeadlineKind parse_deadline_kind(std::string_view name);

/// Willingness-to-pay factor phi(t). Flat keeps phi at 1; the other kinds
/// add a quadratic ramp over the last `ramp_window` periods reaching
/// 1 + intensity_coeff at the horizon.
struct DeadlineRegime {
    DeadlineKind kind = DeadlineKind::Flat;
    int ramp_window = 10;
    double intensity_coeff = 0.0;

    static DeadlineRegime flat();
    static DeadlineRegime moderate(int ramp_window = 10, double coeff = 0.5);
    static DeadlineRegime strong(int ramp_window = 10, double coeff = 1.5);

    bool operator==(const DeadlineRegime&) const = default;
};

struct Environment {
    double eta = 0.01;
    DeadlineRegime deadline;
    int inventory_q = 700;
    int horizon_t = 60;
    PriceGrid grid;
};

/// Expected arrivals per period L(0..T).
struct DemandProfile {
    std::vector<double> values;
    std::string label;
    bool is_oracle = false;

    int horizon() const { return static_cast<int>(values.size()) - 1; }
};

/// v(p) = exp(-eta * p).
double price_response(double price, double eta);

double deadline_factor(int t, const DeadlineRegime& regime, int horizon_t);

/// lambda(t, p) = L(t) * v(p / phi(t)); `price` must lie on the grid.
double intensity(int t, double price, const DemandProfile& profile, const Environment& env);

/// Same as intensity() with the price given by grid index.
double intensity_at(int t, std::size_t price_index, const DemandProfile& profile,
                    const Environment& env);

/// Returns every violated invariant, each message naming its field.
/// An empty result means the environment is valid.
std::vector<std::string> validate_environment(const Environment& env);

/// Throws std::invalid_argument listing all violations.
void require_valid(const Environment& env);

/// Like require_valid but also accepts the boundary cases Q = 0 and T = 0,
/// which the solver and simulator handle.
void require_solvable(const Environment& env);

/// Checks profile shape against the environment horizon.
void require_compatible(const DemandProfile& profile, const Environment& env);

}  // namespace ticketdp
