#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ticketdp/demand.hpp"

using namespace ticketdp;

namespace {

Environment base_env() {
    Environment env;
    env.eta = 0.01;
    env.inventory_q = 700;
    env.horizon_t = 60;
    env.grid = PriceGrid::uniform(40, 160, 10);
    return env;
}

bool has_message(const std::vector<std::string>& errors, const std::string& text) {
    for (const auto& e : errors) {
        if (e.find(text) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(PriceResponse, ZeroPriceIsOne) {
    EXPECT_EQ(price_response(0.0, 0.01), 1.0);
    EXPECT_EQ(price_response(0.0, 3.7), 1.0);
}

TEST(PriceResponse, ClosedFormValues) {
    EXPECT_NEAR(price_response(100.0, 0.01), 0.367879441171, 1e-12);
    EXPECT_NEAR(price_response(200.0, 0.0075), 0.223130160148, 1e-12);
}

TEST(PriceResponse, RejectsBadArguments) {
    EXPECT_THROW(price_response(-1.0, 0.01), std::domain_error);
    EXPECT_THROW(price_response(10.0, 0.0), std::domain_error);
    EXPECT_THROW(price_response(10.0, -0.1), std::domain_error);
}

TEST(DeadlineFactor, FlatIsOneEverywhere) {
    for (int t = 0; t <= 60; ++t) EXPECT_EQ(deadline_factor(t, DeadlineRegime::flat(), 60), 1.0);
}

TEST(DeadlineFactor, RampStartsAtZeroAndEndsAtOnePlusCoeff) {
    const auto moderate = DeadlineRegime::moderate();
    EXPECT_EQ(deadline_factor(50, moderate, 60), 1.0);
    EXPECT_DOUBLE_EQ(deadline_factor(60, moderate, 60), 1.5);
    EXPECT_DOUBLE_EQ(deadline_factor(60, DeadlineRegime::strong(), 60), 2.5);
    // Quarter of the way squared: 1 + 0.5 * (5/10)^2.
    EXPECT_DOUBLE_EQ(deadline_factor(55, moderate, 60), 1.125);
}

TEST(DeadlineFactor, OutOfRangePeriodThrows) {
    EXPECT_THROW(deadline_factor(-1, DeadlineRegime::flat(), 10), std::domain_error);
    EXPECT_THROW(deadline_factor(11, DeadlineRegime::strong(), 10), std::domain_error);
}

TEST(Intensity, ZeroDemandGivesZero) {
    auto env = base_env();
    env.horizon_t = 2;
    DemandProfile profile{{0.0, 5.0, 0.0}, "p", true};
    EXPECT_EQ(intensity(0, 40.0, profile, env), 0.0);
    EXPECT_EQ(intensity(2, 160.0, profile, env), 0.0);
}

TEST(Intensity, FlatAndRampedExamples) {
    Environment env = base_env();
    env.horizon_t = 10;
    env.grid = PriceGrid{{50.0, 100.0}};
    DemandProfile profile{std::vector<double>(11, 100.0), "p", true};
    EXPECT_NEAR(intensity(3, 100.0, profile, env), 36.7879441171, 1e-9);

    // phi(T) = 1 + c with c = 1 gives phi = 2.
    env.deadline = DeadlineRegime{DeadlineKind::Strong, 4, 1.0};
    EXPECT_NEAR(intensity(10, 100.0, profile, env), 60.6530659713, 1e-9);
}

TEST(Intensity, OffGridPriceThrows) {
    auto env = base_env();
    env.horizon_t = 1;
    DemandProfile profile{{1.0, 1.0}, "p", true};
    EXPECT_THROW(intensity(0, 45.0, profile, env), std::domain_error);
}

TEST(ValidateEnvironment, DefaultsAreValid) { EXPECT_TRUE(validate_environment(base_env()).empty()); }

TEST(ValidateEnvironment, ReportsEachViolation) {
    auto env = base_env();
    env.eta = 0.0;
    EXPECT_TRUE(has_message(validate_environment(env), "eta must be positive"));

    env = base_env();
    env.grid = PriceGrid{{40.0, 50.0, 50.0, 60.0}};
    EXPECT_TRUE(has_message(validate_environment(env), "grid not strictly increasing"));

    env = base_env();
    env.grid = PriceGrid{{40.0}};
    EXPECT_TRUE(has_message(validate_environment(env), "at least 2"));

    env = base_env();
    env.inventory_q = 0;
    env.horizon_t = 0;
    const auto errors = validate_environment(env);
    EXPECT_TRUE(has_message(errors, "inventory_q"));
    EXPECT_TRUE(has_message(errors, "horizon_t"));
    EXPECT_THROW(require_valid(env), std::invalid_argument);
    EXPECT_NO_THROW(require_solvable(env));
}

TEST(PriceGrid, UniformAndLookup) {
    const auto grid = PriceGrid::uniform(40, 160, 10);
    ASSERT_EQ(grid.size(), 13u);
    EXPECT_EQ(grid.min_price(), 40.0);
    EXPECT_EQ(grid.max_price(), 160.0);
    EXPECT_EQ(grid.index_of(70.0), 3u);
    EXPECT_FALSE(grid.index_of(75.0).has_value());
}

TEST(DeadlineKind, RoundTripsNames) {
    for (auto k : {DeadlineKind::Flat, DeadlineKind::Moderate, DeadlineKind::Strong}) {
        EXPECT_EQ(parse_deadline_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_deadline_kind("Steep"), std::invalid_argument);
}
