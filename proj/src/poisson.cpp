#include "ticketdp/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace ticketdp {

namespace {

// Above this rate exp(-rate) underflows.
constexpr double kLogSpaceRate = 700.0;

void check_rate(double rate, const char* who) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::domain_error(fmt::format("{}: rate must be finite and non-negative, got {}",
                                            who, rate));
    }
}

// Relative weight below which large-rate pmf terms are treated as zero.
constexpr double kNegligibleWeight = 1e-40;

// Yields p_0, p_1, ... in order. Small rates use the forward recurrence
// p_{n+1} = p_n * rate / (n + 1) from p_0 = exp(-rate). For large rates
// exp(-rate) underflows and a long log-space walk drifts, so the terms are
// built outward from the mode with the same recurrence and normalized.
class PmfWalk {
public:
    explicit PmfWalk(double rate) : rate_(rate) {
        if (rate > kLogSpaceRate) {
            build_from_mode();
            p_ = at(0);
        } else {
            p_ = std::exp(-rate);
        }
    }

    double value() const { return p_; }
    int n() const { return n_; }

    void advance() {
        ++n_;
        if (weights_.empty()) {
            p_ *= rate_ / n_;
        } else {
            p_ = at(n_);
        }
    }

private:
    void build_from_mode() {
        const auto mode = static_cast<int>(std::floor(rate_));
        std::vector<double> below;  // mode - 1, mode - 2, ...
        double w = 1.0;
        for (int n = mode; n > 0 && w >= kNegligibleWeight; --n) {
            w *= n / rate_;
            below.push_back(w);
        }
        first_ = mode - static_cast<int>(below.size());
        weights_.assign(below.rbegin(), below.rend());
        weights_.push_back(1.0);
        w = 1.0;
        for (int n = mode + 1; w >= kNegligibleWeight; ++n) {
            w *= rate_ / n;
            weights_.push_back(w);
        }
        double total = 0.0;
        for (double x : weights_) total += x;
        for (double& x : weights_) x /= total;
    }

    double at(int n) const {
        const int i = n - first_;
        if (i < 0 || i >= static_cast<int>(weights_.size())) return 0.0;
        return weights_[static_cast<std::size_t>(i)];
    }

    double rate_;
    double p_ = 0.0;
    int n_ = 0;
    int first_ = 0;
    std::vector<double> weights_;
};

}  // namespace

PoissonTable truncated_poisson_pmf(double rate, double epsilon) {
    check_rate(rate, "truncated_poisson_pmf");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("truncated_poisson_pmf: epsilon must lie in (0, 1)");
    }
    PoissonTable table;
    table.rate = rate;
    PmfWalk walk(rate);
    double cumulative = walk.value();
    table.pmf.push_back(walk.value());
    while (cumulative < 1.0 - epsilon) {
        walk.advance();
        const double next = cumulative + walk.value();
        table.pmf.push_back(walk.value());
        if (next == cumulative && walk.n() > rate) break;
        cumulative = next;
    }
    table.tail_mass = 1.0 - cumulative;
    table.pmf.back() += table.tail_mass;
    return table;
}

double expected_capped_sales(const PoissonTable& table, int x) {
    if (x <= 0) return 0.0;
    double total = 0.0;
    const std::size_t cap = static_cast<std::size_t>(x);
    for (std::size_t n = 0; n < table.pmf.size(); ++n) {
        total += table.pmf[n] * static_cast<double>(std::min(n, cap));
    }
    return total;
}

std::vector<double> sales_distribution(const PoissonTable& table, int x) {
    if (x < 0) throw std::domain_error("sales_distribution: negative inventory");
    const auto cap = static_cast<std::size_t>(x);
    std::vector<double> dist(cap + 1, 0.0);
    const std::size_t below = std::min(cap, table.pmf.size());
    for (std::size_t n = 0; n < below; ++n) dist[n] = table.pmf[n];
    double tail = 0.0;
    for (std::size_t n = table.pmf.size(); n-- > cap;) tail += table.pmf[n];
    dist[cap] = tail;
    return dist;
}

int poisson_inverse_cdf(double rate, double u) {
    check_rate(rate, "poisson_inverse_cdf");
    PmfWalk walk(rate);
    double cdf = walk.value();
    while (cdf < u) {
        walk.advance();
        const double next = cdf + walk.value();
        if (next == cdf && walk.n() > rate) break;
        cdf = next;
    }
    return walk.n();
}

PoissonSampler::PoissonSampler(double rate) : rate_(rate) {
    check_rate(rate, "PoissonSampler");
    PmfWalk walk(rate);
    double cdf = walk.value();
    cdf_.push_back(cdf);
    for (;;) {
        walk.advance();
        const double next = cdf + walk.value();
        if (next == cdf && walk.n() > rate) break;
        cdf = next;
        cdf_.push_back(cdf);
    }
    saturation_index_ = walk.n();
}

int PoissonSampler::draw(double u) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return saturation_index_;
    return static_cast<int>(it - cdf_.begin());
}

}  // namespace ticketdp
