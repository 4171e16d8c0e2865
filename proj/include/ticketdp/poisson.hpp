#pragma once

#include <cstddef>
#include <vector>

namespace ticketdp {

inline constexpr double kDefaultPoissonEpsilon = 1e-12;

/// Poisson pmf on 0..n_max with the tail beyond n_max folded into the last
/// bucket, so the table is a proper distribution.
struct PoissonTable {
    double rate = 0.0;
    std::vector<double> pmf;
    /// Residual probability P(N > n_max) that was added to pmf.back().
    double tail_mass = 0.0;

    std::size_t n_max() const { return pmf.size() - 1; }
};

/// n_max is the smallest n whose cumulative mass reaches 1 - epsilon.
/// Throws std::domain_error for a negative or non-finite rate.
PoissonTable truncated_poisson_pmf(double rate, double epsilon = kDefaultPoissonEpsilon);

/// E[min(N, x)].
double expected_capped_sales(const PoissonTable& table, int x);

/// Distribution of min(N, x) over 0..x.
std::vector<double> sales_distribution(const PoissonTable& table, int x);

/// Smallest n with P(N <= n) >= u, summing the pmf forward from n = 0.
/// Non-decreasing in `rate` for fixed u.
int poisson_inverse_cdf(double rate, double u);

/// Cached cumulative distribution for repeated inverse-CDF draws at one
/// rate. draw() returns exactly what poisson_inverse_cdf() would.
class PoissonSampler {
public:
    PoissonSampler() = default;
    explicit PoissonSampler(double rate);

    double rate() const { return rate_; }
    int draw(double u) const;

private:
    double rate_ = 0.0;
    std::vector<double> cdf_;
    int saturation_index_ = 0;
};

}  // namespace ticketdp
