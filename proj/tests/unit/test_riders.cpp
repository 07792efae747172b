#include <gtest/gtest.h>

#include <random>

#include "gmxb/errors.hpp"
#include "gmxb/riders/riders.hpp"
#include "gmxb/solver/contract.hpp"

namespace gmxb {
namespace {

EventContext quarter(std::size_t n, bool ratchet = false) {
    EventContext c;
    c.n = n;
    c.dt = 0.25;
    c.time = 0.25 * static_cast<double>(n);
    c.maturity = 10.0;
    c.ratchet = ratchet;
    c.premium = 1.0;
    return c;
}

GmabRider gmab(GmabAccount account, bool ratchet = true) {
    GmabConfig c;
    c.account = account;
    c.withdrawal_limit = 0.15;
    c.ratchet = ratchet;
    return GmabRider(c);
}

TEST(Gmab, PenaltyByAccount) {
    // Wealth above the base: the base falls by the withdrawal.
    EXPECT_DOUBLE_EQ(gmab_penalty(GmabAccount::super, 1.2, 1.0, 0.1, 0.045), 0.1);
    // Below the base the super account scales the base proportionally.
    EXPECT_DOUBLE_EQ(gmab_penalty(GmabAccount::super, 0.8, 1.0, 0.02, 0.03), 1.0 * 0.02 / 0.8);
    // The pension account forgives withdrawals up to G.
    EXPECT_DOUBLE_EQ(gmab_penalty(GmabAccount::pension, 0.8, 1.0, 0.02, 0.03), 0.02);
    EXPECT_DOUBLE_EQ(gmab_penalty(GmabAccount::pension, 0.8, 1.0, 0.04, 0.03), 1.0 * 0.04 / 0.8);
    EXPECT_DOUBLE_EQ(gmab_penalty(GmabAccount::super, 0.8, 1.0, 0.0, 0.03), 0.0);
    EXPECT_THROW(gmab_penalty(GmabAccount::super, 0.8, 1.0, 0.9, 0.03), ContractError);
}

TEST(Gmab, ContractualAmountIsQuarterOfLimit) {
    const GmabRider r = gmab(GmabAccount::super);
    EXPECT_NEAR(r.contractual_amount(quarter(1), {2.0, 1.0}), 0.0375 * 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(r.max_withdrawal(quarter(1), {2.0, 1.0}), 2.0);
}

TEST(Gmab, RatchetThenPenalty) {
    const GmabRider r = gmab(GmabAccount::super);
    const JumpResult up = r.jump(quarter(4, true), {1.3, 1.0}, 0.1);
    EXPECT_DOUBLE_EQ(up.cashflow, 0.1);
    EXPECT_NEAR(up.post.wealth, 1.2, 1e-15);
    EXPECT_NEAR(up.post.base, 1.3 - 0.1, 1e-15);
    const JumpResult off = r.jump(quarter(3, false), {1.3, 1.0}, 0.1);
    EXPECT_NEAR(off.post.base, 0.9, 1e-15);
    const GmabRider flat = gmab(GmabAccount::super, false);
    EXPECT_NEAR(flat.jump(quarter(4, true), {1.3, 1.0}, 0.0).post.base, 1.0, 1e-15);
}

TEST(Gmab, FullSurrenderExhaustsGuaranteeOnRandomStates) {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (auto account : {GmabAccount::super, GmabAccount::pension}) {
        const GmabRider r = gmab(account);
        for (int i = 0; i < 1000; ++i) {
            const StatePoint s{u(gen), u(gen)};
            const bool ratchet = i % 2 == 0;
            const JumpResult j = r.jump(quarter(4, ratchet), s, s.wealth);
            EXPECT_EQ(j.post.base, 0.0);
            EXPECT_EQ(j.post.wealth, 0.0);
            EXPECT_DOUBLE_EQ(j.cashflow, s.wealth);
        }
    }
}

TEST(Gmab, MaturityPayoffAndAdmissibility) {
    const GmabRider r = gmab(GmabAccount::pension);
    EXPECT_DOUBLE_EQ(r.maturity_payoff(quarter(40), {0.7, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(r.maturity_payoff(quarter(40), {1.7, 1.0}), 1.7);
    EXPECT_THROW(r.jump(quarter(1), {1.0, 1.0}, 1.5), ContractError);
    EXPECT_THROW(r.jump(quarter(1), {1.0, 1.0}, -0.1), ContractError);
}

TEST(Gmwb, BasicVariant) {
    GmwbConfig c;
    c.penalty = 0.1;
    const GmwbRider r(c);
    const EventContext e = quarter(3);
    const double g = 1.0 * 0.25 / 10.0;
    EXPECT_NEAR(r.contractual_amount(e, {0.5, 0.8}), g, 1e-15);
    EXPECT_DOUBLE_EQ(r.max_withdrawal(e, {0.5, 0.8}), 0.8);
    const JumpResult j = r.jump(e, {0.5, 0.8}, 0.1);
    EXPECT_NEAR(j.post.base, 0.7, 1e-15);
    EXPECT_NEAR(j.post.wealth, 0.4, 1e-15);
    EXPECT_NEAR(j.cashflow, g + 0.9 * (0.1 - g), 1e-15);
    // Withdrawals beyond the wealth leave an empty account.
    EXPECT_DOUBLE_EQ(r.jump(e, {0.5, 0.8}, 0.8).post.wealth, 0.0);
}

TEST(Gmwb, IndustrySpecifications) {
    const double W = 1.0, A = 1.2, G = 0.05, gam = 0.25;
    EXPECT_NEAR(gmwb_spec_jump(GmwbVariant::spec1, W, A, gam, G), std::min(A - gam, A * (W - gam) / W), 1e-15);
    EXPECT_NEAR(gmwb_spec_jump(GmwbVariant::spec2, W, A, gam, G), std::min(A - gam, W - gam), 1e-15);
    EXPECT_NEAR(gmwb_spec_jump(GmwbVariant::spec3, W, A, gam, G), (A - G) * (W - gam) / (W - G), 1e-15);
    // Within G every specification lowers the base by the withdrawal.
    for (auto v : {GmwbVariant::spec1, GmwbVariant::spec2, GmwbVariant::spec3}) {
        EXPECT_NEAR(gmwb_spec_jump(v, W, A, 0.04, G), A - 0.04, 1e-15);
    }
    // Wealth exhausted by the contractual amount: no base is left.
    EXPECT_DOUBLE_EQ(gmwb_spec_jump(GmwbVariant::spec3, 0.04, A, 0.06, 0.04), 0.0);
}

TEST(Gmwb, EarlyAndExcessPenalties) {
    GmwbConfig c;
    c.variant = GmwbVariant::spec1;
    c.withdrawal_rate = 0.05;
    c.excess_penalty = 0.1;
    c.early_penalty = 0.2;
    c.entry_age = 55.0;
    c.early_age = 59.5;
    const GmwbRider r(c);
    const double g = 0.05 * 1.0 * 0.25;
    const double early = r.cashflow(quarter(1), 1.0, 0.1, g);
    const double excess = 0.1 * (0.1 - g);
    EXPECT_NEAR(early, 0.1 - excess - 0.2 * (0.1 - excess), 1e-15);
    EXPECT_NEAR(r.cashflow(quarter(30), 1.0, 0.1, g), 0.1 - excess, 1e-15);
}

TEST(Glwb, BonusRatchetAndExcess) {
    GlwbConfig c;
    c.withdrawal_rate = 0.05;
    c.bonus = 0.01;
    c.penalty = 0.05;
    const GlwbRider r(c);
    const EventContext e = quarter(4, true);
    const JumpResult none = r.jump(e, {0.9, 1.0}, 0.0);
    EXPECT_NEAR(none.post.base, 1.01, 1e-15);
    EXPECT_NEAR(r.jump(e, {1.5, 1.0}, 0.0).post.base, 1.5, 1e-15);
    const double g = 0.05 * 0.25;
    const JumpResult within = r.jump(quarter(3), {0.9, 1.0}, g);
    EXPECT_NEAR(within.post.base, 1.0, 1e-15);
    EXPECT_NEAR(within.cashflow, g, 1e-15);
    const JumpResult over = r.jump(quarter(3), {0.9, 1.0}, 0.2);
    EXPECT_NEAR(over.post.base, 1.0 * (0.9 - 0.2) / (0.9 - g), 1e-14);
    EXPECT_NEAR(over.cashflow, g + 0.95 * (0.2 - g), 1e-15);
    // The contractual amount stays available when the account is empty.
    EXPECT_NEAR(r.max_withdrawal(e, {0.0, 1.0}), g, 1e-15);
}

TEST(GmibGmdb, PayoffsAndBenefits) {
    EXPECT_DOUBLE_EQ(gmib_payoff(1.1, 1.0, 1.0), 1.1);
    EXPECT_DOUBLE_EQ(gmib_payoff(1.1, 1.3, 1.0), 1.3);
    EXPECT_DOUBLE_EQ(gmdb_benefit(DeathBenefitType::max_base_wealth, 0.8, 1.1, 1.0), 1.1);
    EXPECT_DOUBLE_EQ(gmdb_benefit(DeathBenefitType::premium, 0.8, 1.1, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(gmdb_benefit(DeathBenefitType::max_premium_wealth, 1.3, 1.1, 1.0), 1.3);
    EXPECT_DOUBLE_EQ(gmdb_benefit(DeathBenefitType::wealth, 0.8, 1.1, 1.0), 0.8);
    EXPECT_DOUBLE_EQ(gmdb_benefit(DeathBenefitType::none, 0.8, 1.1, 1.0), 0.0);
    GmdbConfig d;
    d.rollup = 0.01;
    const GmdbRider r(d);
    EXPECT_NEAR(r.jump(quarter(4, true), {1.2, 1.0}, 0.0).post.base, 1.2, 1e-15);
    EXPECT_NEAR(r.jump(quarter(3), {1.2, 1.0}, 0.0).post.base, 1.01, 1e-15);
    EXPECT_THROW(r.jump(quarter(3), {1.2, 1.0}, 0.1), ContractError);
}

TEST(Strategy, StaticRulesAreClamped) {
    EXPECT_DOUBLE_EQ(static_withdrawal(WithdrawalRule::wealth_fraction(0.04), 2.0, 0.05, 2.0), 0.08);
    EXPECT_DOUBLE_EQ(static_withdrawal(WithdrawalRule::contractual(2.0), 2.0, 0.05, 2.0), 0.1);
    EXPECT_DOUBLE_EQ(static_withdrawal(WithdrawalRule::fixed(3.0), 2.0, 0.05, 2.0), 2.0);
    EXPECT_DOUBLE_EQ(static_withdrawal({WithdrawalRule::Kind::maximum, 0.0}, 2.0, 0.05, 1.5), 1.5);
    EXPECT_DOUBLE_EQ(static_withdrawal(WithdrawalRule::nothing(), 2.0, 0.05, 1.5), 0.0);
    StrategySpec bad = StrategySpec::optimal(1);
    EXPECT_THROW(bad.validate(), ParameterError);
}

}  // namespace
}  // namespace gmxb
