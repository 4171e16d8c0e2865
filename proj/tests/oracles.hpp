#pragma once

// Reference implementations used only by the tests. Everything here is
// written from the model definition, without calling library internals.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline double poisson_pmf(double rate, int n) {
    if (rate == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-rate + n * std::log(rate) - std::lgamma(n + 1.0));
}

struct Model {
    std::vector<double> demand;  // L(t), t = 0..T
    std::vector<double> prices;  // ascending
    double eta = 0.01;
    int q = 0;
    bool ramp = false;  // quadratic deadline ramp
    int window = 10;
    double coeff = 0.0;

    int horizon() const { return static_cast<int>(demand.size()) - 1; }

    double phi(int t) const {
        if (!ramp) return 1.0;
        const double start = horizon() - window;
        if (t <= start) return 1.0;
        const double r = (t - start) / window;
        return 1.0 + coeff * r * r;
    }

    double rate(int t, std::size_t k) const {
        return demand[static_cast<std::size_t>(t)] * std::exp(-eta * prices[k] / phi(t));
    }
};

/// Naive backward recursion with untruncated sums to n = n_cap.
/// Returns V[t][x][i] for t = 0..T+1.
inline std::vector<std::vector<std::vector<double>>> brute_force_values(const Model& m,
                                                                        int n_cap = 50) {
    const int T = m.horizon();
    const std::size_t K = m.prices.size();
    std::vector<std::vector<std::vector<double>>> V(
        static_cast<std::size_t>(T + 2),
        std::vector<std::vector<double>>(static_cast<std::size_t>(m.q + 1), std::vector<double>(K, 0.0)));
    for (int t = T; t >= 0; --t) {
        for (int x = 0; x <= m.q; ++x) {
            for (std::size_t i = 0; i < K; ++i) {
                double best = -1.0;
                for (std::size_t k = i; k < K; ++k) {
                    const double lam = m.rate(t, k);
                    double ev = 0.0;
                    for (int n = 0; n <= n_cap; ++n) {
                        const int s = n < x ? n : x;
                        ev += poisson_pmf(lam, n) *
                              (m.prices[k] * s +
                               V[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(x - s)][k]);
                    }
                    if (ev > best) best = ev;
                }
                V[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)][i] = best;
            }
        }
    }
    return V;
}

/// Expected revenue of a fixed price path (one grid index per period),
/// tracking the inventory distribution forward.
inline double open_loop_revenue(const Model& m, const std::vector<std::size_t>& path,
                                int n_cap = 50) {
    std::vector<double> dist(static_cast<std::size_t>(m.q + 1), 0.0);
    dist[static_cast<std::size_t>(m.q)] = 1.0;
    double revenue = 0.0;
    for (int t = 0; t <= m.horizon(); ++t) {
        const std::size_t k = path[static_cast<std::size_t>(t)];
        const double lam = m.rate(t, k);
        std::vector<double> next(dist.size(), 0.0);
        for (int x = 0; x <= m.q; ++x) {
            const double px = dist[static_cast<std::size_t>(x)];
            if (px == 0.0) continue;
            for (int n = 0; n <= n_cap; ++n) {
                const int s = n < x ? n : x;
                const double p = px * poisson_pmf(lam, n);
                revenue += p * m.prices[k] * s;
                next[static_cast<std::size_t>(x - s)] += p;
            }
        }
        dist = std::move(next);
    }
    return revenue;
}

/// All non-decreasing index sequences of the given length over K prices.
inline std::vector<std::vector<std::size_t>> monotone_paths(std::size_t length, std::size_t K,
                                                            std::size_t first = 0) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t lo) -> void {
        if (cur.size() == length) {
            out.push_back(cur);
            return;
        }
        for (std::size_t k = lo; k < K; ++k) {
            cur.push_back(k);
            self(self, k);
            cur.pop_back();
        }
    };
    rec(rec, first);
    return out;
}

struct Moments {
    double mean = 0.0;
    double second = 0.0;
    double variance() const { return second - mean * mean; }
};

/// Exact first and second moments of total revenue when following a fixed
/// feedback policy action(t, x, i), by backward recursion.
inline Moments policy_revenue_moments(const Model& m,
                                      const std::function<std::size_t(int, int, std::size_t)>& action,
                                      int n_cap = 80) {
    const std::size_t K = m.prices.size();
    const auto width = static_cast<std::size_t>(m.q + 1);
    std::vector<Moments> next(width * K);
    std::vector<Moments> cur(width * K);
    for (int t = m.horizon(); t >= 0; --t) {
        for (int x = 0; x <= m.q; ++x) {
            for (std::size_t i = 0; i < K; ++i) {
                const std::size_t k = action(t, x, i);
                const double lam = m.rate(t, k);
                Moments out;
                for (int n = 0; n <= n_cap; ++n) {
                    const int s = n < x ? n : x;
                    const double r = m.prices[k] * s;
                    const Moments& after = next[static_cast<std::size_t>(x - s) * K + k];
                    const double p = poisson_pmf(lam, n);
                    out.mean += p * (r + after.mean);
                    out.second += p * (r * r + 2.0 * r * after.mean + after.second);
                }
                cur[static_cast<std::size_t>(x) * K + i] = out;
            }
        }
        std::swap(cur, next);
    }
    return next[static_cast<std::size_t>(m.q) * K];
}

/// Smallest n with P(N <= n) >= u, summing the closed-form pmf.
inline int inverse_cdf(double rate, double u) {
    double cdf = 0.0;
    for (int n = 0; n < 100000; ++n) {
        cdf += poisson_pmf(rate, n);
        if (cdf >= u) return n;
    }
    return -1;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace oracle
