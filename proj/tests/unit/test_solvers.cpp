#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "gmxb/errors.hpp"
#include "gmxb/riders/riders.hpp"
#include "gmxb/solver/backward.hpp"
#include "gmxb/solver/ghqc.hpp"
#include "gmxb/solver/mc.hpp"
#include "gmxb/solver/pde.hpp"
#include "support/oracles.hpp"

namespace gmxb {
namespace {

Contract gmab_contract(double rate, double vol, double fee, bool ratchet) {
    Contract c;
    GmabConfig g;
    g.ratchet = ratchet;
    c.rider = std::make_shared<GmabRider>(g);
    c.market = MarketModel::uniform(10.0, 40, rate, vol, ratchet ? 4 : 0);
    c.fee = FeeStructure::continuous(fee);
    return c;
}

Contract plain_contract(double rate, double vol) {
    Contract c;
    c.rider = std::make_shared<PlainAccount>();
    c.market = MarketModel::uniform(10.0, 40, rate, vol, 0);
    return c;
}

GhqcConfig small_ghqc(int m = 400, int j = 20) {
    GhqcConfig g;
    g.lattice.m = m;
    g.lattice.j = j;
    return g;
}

TEST(Lattice, PremiumIsANodeOnBothAxes) {
    const MarketModel m = MarketModel::uniform(10.0, 40, 0.05, 0.2, 4);
    const Lattice lat = Lattice::build(LatticeSpec{}, m, 2.5);
    EXPECT_GE(lat.find_wealth(2.5), 0);
    EXPECT_GE(lat.find_base(2.5), 0);
    EXPECT_EQ(lat.w_size(), 401u);
    EXPECT_EQ(lat.a_size(), 200u);
    EXPECT_DOUBLE_EQ(lat.base(0), 0.0);
    // Positive bases coincide with wealth nodes.
    for (std::size_t j = 1; j < lat.a_size(); ++j) {
        if (lat.base(j) <= lat.wealth(lat.w_size() - 1)) EXPECT_GE(lat.diagonal_node(j), 0) << j;
    }
    EXPECT_EQ(lat.diagonal_node(0), -1);
    // The floor is lowered so that the premium falls on a node.
    EXPECT_GT(lat.wealth(0), 0.0);
    EXPECT_LE(lat.wealth(0), 2.5e-6);
    EXPECT_GE(std::log(lat.wealth(lat.w_size() - 1) / 2.5), 0.3 + 5.0 * 0.2 * std::sqrt(10.0) - 1e-9);
    EXPECT_THROW(Lattice::build(LatticeSpec{2, 200}, m, 1.0), ParameterError);
}

TEST(Ghqc, ClosedFormWithoutRatchet) {
    for (double vol : {0.1, 0.3}) {
        const Contract c = gmab_contract(0.04, vol, 0.02, false);
        const double want = testing::gmab_closed_form(1.0, 1.0, 0.04, vol, 10.0, 0.02);
        const PricingResult r = ghqc_price(c, small_ghqc());
        EXPECT_NEAR(r.value, want, 1e-4) << "vol " << vol;
        EXPECT_EQ(r.method, "ghqc");
    }
}

TEST(Ghqc, GaussHermiteIntegrationIsCloseToExact) {
    const Contract c = gmab_contract(0.04, 0.2, 0.02, false);
    GhqcConfig g = small_ghqc();
    g.integration = Integration::gauss_hermite;
    const double want = testing::gmab_closed_form(1.0, 1.0, 0.04, 0.2, 10.0, 0.02);
    EXPECT_NEAR(ghqc_price(c, g).value, want, 1e-3);
}

TEST(Ghqc, MartingaleWithoutFee) {
    for (double vol : {0.1, 0.25}) {
        Contract c = plain_contract(0.05, vol);
        EXPECT_NEAR(ghqc_price(c, small_ghqc()).value, 1.0, 5e-4);
        c.mortality = MortalityModel(std::vector<double>(40, 0.004));
        EXPECT_NEAR(ghqc_price(c, small_ghqc()).value, 1.0, 5e-4);
    }
}

TEST(Ghqc, MortalityWeightedRecursionMatchesConditional) {
    Contract c = gmab_contract(0.03, 0.2, 0.015, true);
    c.rider = std::make_shared<GmabRider>(GmabConfig{}, DeathBenefitType::max_base_wealth);
    std::vector<double> q(40);
    for (std::size_t n = 0; n < q.size(); ++n) q[n] = 0.002 + 0.0002 * static_cast<double>(n);
    c.mortality = MortalityModel(q);
    const double a = ghqc_price(c, small_ghqc(200, 60)).value;
    const double b = ghqc_price_mortality_averaged(c, small_ghqc(200, 60), 1.0, 1.0).value;
    EXPECT_NEAR(a / b - 1.0, 0.0, 1e-6);
}

TEST(Ghqc, ValueIncreasesWithGuaranteeAndFallsWithFee) {
    const double low = ghqc_price(gmab_contract(0.03, 0.2, 0.01, true), small_ghqc(200, 60)).value;
    const double high = ghqc_price(gmab_contract(0.03, 0.2, 0.03, true), small_ghqc(200, 60)).value;
    const double flat = ghqc_price(gmab_contract(0.03, 0.2, 0.01, false), small_ghqc(200, 60)).value;
    EXPECT_GT(low, high);
    EXPECT_GT(low, flat);
}

TEST(Ghqc, SeasonedStateUsesInterpolation) {
    const Contract c = gmab_contract(0.04, 0.2, 0.02, false);
    const double want = testing::gmab_closed_form(1.3, 1.0, 0.04, 0.2, 10.0, 0.02);
    EXPECT_NEAR(ghqc_price(c, small_ghqc(800, 20), 1.3, 1.0).value, want, 2e-4);
}

TEST(Pde, ClosedFormWithoutRatchet) {
    const Contract c = gmab_contract(0.05, 0.2, 0.02, false);
    PdeConfig p;
    p.lattice.m = 1600;
    p.lattice.j = 5;
    const double want = testing::gmab_closed_form(1.0, 1.0, 0.05, 0.2, 10.0, 0.02);
    EXPECT_NEAR(pde_price(c, p).value, want, 2e-5);
}

TEST(Pde, MartingaleAndDeterministicLimit) {
    PdeConfig p;
    p.lattice.m = 400;
    p.lattice.j = 5;
    EXPECT_NEAR(pde_price(plain_contract(0.05, 0.2), p).value, 1.0, 5e-4);
    // With σ = 0 the account grows at r − α and the guarantee pays A.
    const Contract c = gmab_contract(0.03, 0.0, 0.05, false);
    EXPECT_NEAR(pde_price(c, p).value, std::exp(-0.3), 1e-6);
    EXPECT_NEAR(ghqc_price(c, small_ghqc()).value, std::exp(-0.3), 1e-6);
}

TEST(Pde, SchemeValidation) {
    FdScheme s;
    s.theta = 0.2;
    EXPECT_THROW(s.validate(), ParameterError);
    s.theta = 0.5;
    s.steps_per_interval = 0;
    EXPECT_THROW(s.validate(), ParameterError);
}

McConfig small_mc(long paths) {
    McConfig m;
    m.paths = paths;
    m.batch_size = 10'000;
    return m;
}

TEST(Mc, MartingaleWithinThreeStandardErrors) {
    McConfig m = small_mc(200'000);
    m.control_variate = false;
    const PricingResult r = mc_price(plain_contract(0.05, 0.2), m);
    EXPECT_GT(r.std_error, 0.0);
    EXPECT_LT(std::abs(r.value - 1.0), 3.0 * r.std_error);
}

TEST(Mc, ClosedFormWithinThreeStandardErrors) {
    const Contract c = gmab_contract(0.05, 0.2, 0.02, false);
    const PricingResult r = mc_price(c, small_mc(400'000));
    const double want = testing::gmab_closed_form(1.0, 1.0, 0.05, 0.2, 10.0, 0.02);
    EXPECT_LT(std::abs(r.value - want), 3.0 * r.std_error);
}

TEST(Mc, SeedDeterminesResultRegardlessOfThreads) {
    const Contract c = gmab_contract(0.05, 0.2, 0.0271, true);
    McConfig a = small_mc(60'000);
    McConfig b = a;
    b.threads = 3;
    const PricingResult ra = mc_price(c, a);
    const PricingResult rb = mc_price(c, b);
    EXPECT_EQ(ra.value, rb.value);
    EXPECT_EQ(ra.std_error, rb.std_error);
    McConfig other = a;
    other.seed = a.seed + 1;
    EXPECT_NE(mc_price(c, other).value, ra.value);
    EXPECT_NE(batch_seed(1, 0), batch_seed(1, 1));
}

TEST(Mc, AntitheticReducesVariance) {
    const Contract c = gmab_contract(0.05, 0.2, 0.0271, true);
    McConfig plain = small_mc(100'000);
    plain.control_variate = false;
    plain.antithetic = false;
    McConfig anti = plain;
    anti.antithetic = true;
    EXPECT_LE(mc_price(c, anti).std_error, mc_price(c, plain).std_error);
}

TEST(Mc, RejectsOptimalStrategies) {
    Contract c = gmab_contract(0.05, 0.2, 0.02, true);
    c.strategy = StrategySpec::optimal(11);
    EXPECT_THROW(mc_price(c, small_mc(1000)), UnsupportedError);
    McConfig bad;
    bad.paths = 0;
    EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(Mc, AgreesWithGhqcOnStaticWithdrawals) {
    Contract c = gmab_contract(0.02, 0.2, 0.0669, true);
    GmabConfig g;
    g.account = GmabAccount::pension;
    g.withdrawal_limit = 0.15;
    c.rider = std::make_shared<GmabRider>(g);
    c.strategy = StrategySpec::fixed(WithdrawalRule::wealth_fraction(0.0375));
    const PricingResult m = mc_price(c, small_mc(200'000));
    const PricingResult q = ghqc_price(c, small_ghqc(400, 200));
    EXPECT_LT(std::abs(m.value - q.value), 3.0 * m.std_error + 1e-4);
}

TEST(Backward, CandidatesCoverIntervalAndContractualAmount) {
    std::vector<double> out;
    withdrawal_candidates(1.0, 0.0375, 5, out);
    EXPECT_DOUBLE_EQ(out.front(), 0.0);
    EXPECT_DOUBLE_EQ(out.back(), 1.0);
    EXPECT_NE(std::find(out.begin(), out.end(), 0.0375), out.end());
    EXPECT_NE(std::find(out.begin(), out.end(), 0.5), out.end());
}

TEST(Backward, OptimalDominatesStatic) {
    Contract c = gmab_contract(0.03, 0.2, 0.02, true);
    GmabConfig g;
    g.withdrawal_limit = 0.15;
    c.rider = std::make_shared<GmabRider>(g);
    const GhqcConfig cfg = small_ghqc(200, 60);
    c.strategy = StrategySpec::optimal(11);
    const double best = ghqc_price(c, cfg).value;
    c.strategy = StrategySpec::fixed(WithdrawalRule::contractual());
    EXPECT_GE(best, ghqc_price(c, cfg).value - 1e-10);
    c.strategy = StrategySpec::none();
    EXPECT_GE(best, ghqc_price(c, cfg).value - 1e-10);
}

TEST(Backward, ThresholdBetweenStaticAndOptimal) {
    Contract c = gmab_contract(0.03, 0.2, 0.02, true);
    GmabConfig g;
    g.withdrawal_limit = 0.15;
    c.rider = std::make_shared<GmabRider>(g);
    const GhqcConfig cfg = small_ghqc(200, 60);
    c.strategy = StrategySpec::threshold(0.0, 11);
    const double t0 = ghqc_price(c, cfg).value;
    c.strategy = StrategySpec::optimal(11);
    EXPECT_NEAR(t0, ghqc_price(c, cfg).value, 1e-12);
}

TEST(Fees, DiscreteOnWealthMatchesContinuousEquivalent) {
    Contract c = gmab_contract(0.03, 0.2, 0.0, true);
    const double discrete = 0.04;
    c.fee = FeeStructure::on_wealth(discrete);
    const double a = ghqc_price(c, small_ghqc(400, 200)).value;
    const double pa = pde_price(c, PdeConfig{}).value;
    c.fee = FeeStructure::continuous(discrete_to_continuous_rate(discrete, 0.25));
    EXPECT_NEAR(a, ghqc_price(c, small_ghqc(400, 200)).value, 1e-12);
    EXPECT_NEAR(pa, pde_price(c, PdeConfig{}).value, 1e-12);
}

TEST(Fees, DiscreteFeesAgreeWithSimulation) {
    // The death benefit reads wealth before the fee, which the lattice has to recover.
    Contract c = gmab_contract(0.03, 0.2, 0.0, true);
    c.rider = std::make_shared<GmabRider>(GmabConfig{}, DeathBenefitType::max_base_wealth);
    c.mortality = MortalityModel(std::vector<double>(40, 0.01));
    McConfig mc;
    mc.paths = 400'000;
    for (const FeeStructure& fee : {FeeStructure::on_wealth(0.03), FeeStructure::on_base(0.03)}) {
        c.fee = fee;
        const double g = ghqc_price(c, small_ghqc(400, 200)).value;
        const PricingResult m = mc_price(c, mc);
        EXPECT_NEAR(g, m.value, 3.0 * m.std_error + 1e-4) << static_cast<int>(fee.kind);
    }
}

}  // namespace
}  // namespace gmxb
