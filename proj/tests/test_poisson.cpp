#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ticketdp/poisson.hpp"

using namespace ticketdp;

TEST(TruncatedPoisson, DegenerateRate) {
    const auto t = truncated_poisson_pmf(0.0);
    ASSERT_EQ(t.pmf.size(), 1u);
    EXPECT_EQ(t.pmf[0], 1.0);
}

TEST(TruncatedPoisson, MatchesClosedForm) {
    const auto t = truncated_poisson_pmf(1.0);
    for (int n = 0; n < 10; ++n) {
        EXPECT_NEAR(t.pmf[static_cast<std::size_t>(n)], oracle::poisson_pmf(1.0, n), 1e-15);
    }
    EXPECT_NEAR(t.pmf[2], 0.183939720586, 1e-12);
}

TEST(TruncatedPoisson, SumsToOneAndStopsAtTolerance) {
    for (double rate : {0.3, 1.0, 7.5, 42.0, 350.0, 900.0, 2500.0}) {
        const auto t = truncated_poisson_pmf(rate);
        EXPECT_NEAR(std::accumulate(t.pmf.begin(), t.pmf.end(), 0.0), 1.0, 1e-12) << rate;
        // First n whose cumulative mass reaches 1 - eps, summed in extended precision.
        long double cdf = 0.0L;
        std::size_t crossing = 0;
        for (;; ++crossing) {
            const auto n = static_cast<long double>(crossing);
            cdf += std::exp(-static_cast<long double>(rate) + n * std::log(static_cast<long double>(rate)) -
                            std::lgamma(n + 1.0L));
            if (cdf >= 1.0L - 1e-12L) break;
        }
        EXPECT_EQ(t.n_max(), crossing) << rate;
    }
    EXPECT_THROW(truncated_poisson_pmf(-1.0), std::domain_error);
    EXPECT_THROW(truncated_poisson_pmf(1.0, 0.0), std::domain_error);
}

TEST(ExpectedCappedSales, Examples) {
    const auto t1 = truncated_poisson_pmf(1.0);
    EXPECT_EQ(expected_capped_sales(t1, 0), 0.0);
    EXPECT_NEAR(expected_capped_sales(t1, 1), 1.0 - std::exp(-1.0), 1e-12);
    EXPECT_NEAR(expected_capped_sales(truncated_poisson_pmf(2.0), 1000000), 2.0, 1e-10);
}

TEST(SalesDistribution, ExamplesAndConsistency) {
    const auto t1 = truncated_poisson_pmf(1.0);
    const auto d0 = sales_distribution(t1, 0);
    ASSERT_EQ(d0.size(), 1u);
    EXPECT_EQ(d0[0], 1.0);

    const auto d1 = sales_distribution(t1, 1);
    ASSERT_EQ(d1.size(), 2u);
    EXPECT_NEAR(d1[0], std::exp(-1.0), 1e-15);
    EXPECT_NEAR(d1[1], 1.0 - std::exp(-1.0), 1e-12);

    const auto t = truncated_poisson_pmf(6.3);
    for (int x : {0, 1, 3, 6, 9, 30, 500}) {
        const auto d = sales_distribution(t, x);
        double total = 0.0;
        double mean = 0.0;
        for (std::size_t s = 0; s < d.size(); ++s) {
            total += d[s];
            mean += static_cast<double>(s) * d[s];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(mean, expected_capped_sales(t, x), 1e-12);
    }
}

TEST(PoissonInverseCdf, Examples) {
    EXPECT_EQ(poisson_inverse_cdf(0.0, 0.999), 0);
    EXPECT_EQ(poisson_inverse_cdf(1.0, 0.3), 0);
    EXPECT_EQ(poisson_inverse_cdf(1.0, 0.5), 1);
    EXPECT_EQ(poisson_inverse_cdf(1.0, 0.8), 2);
}

TEST(PoissonInverseCdf, AgreesWithOracleAndSampler) {
    for (double rate : {0.2, 1.0, 3.3, 25.0, 180.0}) {
        const PoissonSampler sampler(rate);
        for (double u : {0.001, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999}) {
            const int n = poisson_inverse_cdf(rate, u);
            EXPECT_EQ(n, oracle::inverse_cdf(rate, u)) << rate << " " << u;
            EXPECT_EQ(sampler.draw(u), n);
        }
    }
}

TEST(PoissonInverseCdf, LargeRateIsFiniteAndCentered) {
    const int n = poisson_inverse_cdf(5000.0, 0.5);
    EXPECT_NEAR(n, 5000, 3);
    EXPECT_EQ(PoissonSampler(5000.0).draw(0.5), n);
}
