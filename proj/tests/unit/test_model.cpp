#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gmxb/errors.hpp"
#include "gmxb/model/market.hpp"
#include "gmxb/model/mortality.hpp"

namespace gmxb {
namespace {

TEST(Market, UniformScheduleAndRatchets) {
    const MarketModel m = MarketModel::uniform(10.0, 40, 0.05, 0.2, 4);
    ASSERT_EQ(m.events(), 40u);
    EXPECT_DOUBLE_EQ(m.maturity(), 10.0);
    EXPECT_NEAR(m.dt(7), 0.25, 1e-15);
    for (std::size_t n = 1; n <= 40; ++n) EXPECT_EQ(m.is_ratchet(n), n % 4 == 0) << n;
    EXPECT_NEAR(m.log_return_mean(), (0.05 - 0.02) * 10.0, 1e-12);
    EXPECT_NEAR(m.log_return_stdev(), 0.2 * std::sqrt(10.0), 1e-12);
}

TEST(Market, DiscountMultiplies) {
    const MarketModel m({0.0, 0.5, 1.5, 2.0}, {0.01, 0.03, 0.05}, {0.1, 0.2, 0.3}, {false, true, false});
    EXPECT_NEAR(discount(m, 0, 3), std::exp(-(0.005 + 0.03 + 0.025)), 1e-15);
    EXPECT_NEAR(discount(m, 1, 3) * discount(m, 0, 1), discount(m, 0, 3), 1e-15);
    EXPECT_DOUBLE_EQ(discount(m, 2, 2), 1.0);
    EXPECT_THROW(discount(m, 2, 1), ParameterError);
}

TEST(Market, WealthStepIsLognormal) {
    const MarketModel m = MarketModel::uniform(1.0, 4, 0.04, 0.25, 0);
    const FeeStructure fee = FeeStructure::continuous(0.01);
    const double dt = 0.25;
    const double expected = 2.0 * std::exp((0.04 - 0.01 - 0.5 * 0.0625) * dt + 0.25 * std::sqrt(dt) * 0.7);
    EXPECT_NEAR(wealth_step(m, fee, 2, 2.0, 0.7), expected, 1e-14);
}

TEST(Market, FeeConversionRoundTrip) {
    for (double a : {0.0, 0.001, 0.02, 0.15}) {
        const double d = discrete_to_continuous_rate(a, 0.25);
        EXPECT_NEAR(d, -std::log(1.0 - a * 0.25) / 0.25, 1e-15);
        EXPECT_NEAR(continuous_to_discrete_rate(d, 0.25), a, 1e-15);
    }
}

TEST(Market, DiscreteFeeDeduction) {
    EXPECT_DOUBLE_EQ(apply_fee_deduction(FeeStructure::continuous(0.02), 0.25, 1.0, 2.0), 1.0);
    EXPECT_NEAR(apply_fee_deduction(FeeStructure::on_wealth(0.04), 0.25, 1.0, 2.0), 0.99, 1e-15);
    EXPECT_NEAR(apply_fee_deduction(FeeStructure::on_base(0.04), 0.25, 1.0, 2.0), 0.98, 1e-15);
    // A fee on the base cannot take the account below zero.
    EXPECT_DOUBLE_EQ(apply_fee_deduction(FeeStructure::on_base(0.04), 0.25, 0.001, 2.0), 0.0);
}

TEST(Market, RejectsInconsistentInput) {
    EXPECT_THROW(MarketModel({0.0, 1.0}, {0.01, 0.02}, {0.1}, {false}), ParameterError);
    EXPECT_THROW(MarketModel({0.0, 1.0, 0.5}, {0.01, 0.02}, {0.1, 0.1}, {false, false}), ParameterError);
    EXPECT_THROW(MarketModel::uniform(10.0, 0, 0.05, 0.2, 4), ParameterError);
}

TEST(Mortality, SurvivalIsCumulativeProduct) {
    const MortalityModel m({0.1, 0.2, 0.5});
    EXPECT_DOUBLE_EQ(m.p(0), 1.0);
    EXPECT_NEAR(m.p(1), 0.9, 1e-15);
    EXPECT_NEAR(m.p(2), 0.72, 1e-15);
    EXPECT_NEAR(m.p(3), 0.36, 1e-15);
    EXPECT_FALSE(m.is_zero());
    EXPECT_TRUE(MortalityModel::none(4).is_zero());
    EXPECT_THROW(MortalityModel({0.1, 1.5}), ParameterError);
}

TEST(Mortality, ReadsLifeTable) {
    std::istringstream in("# age, q\n65, 0.01\n66 0.012\n\n67,0.015  # trailing comment\n");
    const LifeTable t = read_life_table(in);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_DOUBLE_EQ(t.at(66), 0.012);
    std::istringstream bad("65, 1.7\n");
    EXPECT_THROW(read_life_table(bad), DataError);
    std::istringstream junk("65, abc\n");
    EXPECT_THROW(read_life_table(junk), DataError);
    EXPECT_THROW(read_life_table_file("/nonexistent/table.csv"), DataError);
}

TEST(Mortality, QuarterlyFactorsMultiplyBackToAnnual) {
    const LifeTable t = {{65, 0.02}, {66, 0.03}, {67, 0.05}};
    const MarketModel m = MarketModel::uniform(2.0, 8, 0.0, 0.1, 0);
    const MortalityModel q = mortality_from_life_table(t, 65.0, m.times());
    ASSERT_EQ(q.events(), 8u);
    EXPECT_NEAR(q.p(4), 0.98, 1e-14);
    EXPECT_NEAR(q.p(8), 0.98 * 0.97, 1e-14);
    // Uniform deaths within the year: survival falls linearly.
    EXPECT_NEAR(q.p(2), 1.0 - 0.5 * 0.02, 1e-14);
    EXPECT_THROW(mortality_from_life_table(t, 66.5, m.times()), DataError);
}

}  // namespace
}  // namespace gmxb
