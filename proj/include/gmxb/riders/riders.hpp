#pragma once

#include "gmxb/riders/rider.hpp"

namespace gmxb {

// ---------------------------------------------------------------- GMAB

enum class GmabAccount { super, pension };

struct GmabConfig {
    GmabAccount account = GmabAccount::super;
    // Annual penalty-free withdrawal fraction of the wealth account; G_n = g·W(t_n⁻)·dt_n.
    double withdrawal_limit = 0.0;
    bool ratchet = true;
};

// Benefit-base penalty C_n(γ) of the GMAB super and pension accounts.
double gmab_penalty(GmabAccount account, double wealth, double base, double gamma,
                    double contractual);

/// Capital-protection rider: maturity payoff max(W, A), withdrawals reduce
/// the benefit base through the penalty C_n, optional ratchet on
/// anniversaries.
class GmabRider final : public Rider {
public:
    explicit GmabRider(GmabConfig config, DeathBenefitType death = DeathBenefitType::none);

    std::string name() const override { return "gmab"; }
    double contractual_amount(const EventContext& ctx, StatePoint pre) const override;
    double max_withdrawal(const EventContext& ctx, StatePoint pre) const override;
    JumpResult jump(const EventContext& ctx, StatePoint pre, double gamma) const override;
    double maturity_payoff(const EventContext& ctx, StatePoint pre) const override;
    bool homogeneous() const override { return true; }

    const GmabConfig& config() const { return config_; }

private:
    GmabConfig config_;
};

// ---------------------------------------------------------------- GMWB

enum class GmwbVariant { basic, spec1, spec2, spec3 };
enum class RatchetTiming { none, before_withdrawal, after_withdrawal };

struct GmwbConfig {
    GmwbVariant variant = GmwbVariant::basic;
    // Excess-withdrawal penalty β applied to the cashflow (basic variant).
    double penalty = 0.0;
    // Industry variants: excess and early-withdrawal penalties βᵉ, βᵍ.
    double excess_penalty = 0.0;
    double early_penalty = 0.0;
    double early_age = 59.5;
    double entry_age = 65.0;
    // Industry variants: G_n = rate·A(t_n⁻)·dt_n. Basic: G_n = W(0)·dt_n/T.
    double withdrawal_rate = 0.0;
    RatchetTiming ratchet = RatchetTiming::none;
};

// Benefit base after a withdrawal under the industry specifications 1–3.
double gmwb_spec_jump(GmwbVariant variant, double wealth, double base, double gamma,
                      double contractual);

/// Withdrawal-benefit rider.
///
/// The basic variant reduces the base by the full withdrawal and penalizes
/// the cashflow above G_n. Specifications 1–3 penalize the base after excess
/// withdrawals and charge excess and early-withdrawal penalties on the
/// cashflow.
class GmwbRider final : public Rider {
public:
    explicit GmwbRider(GmwbConfig config, DeathBenefitType death = DeathBenefitType::none);

    std::string name() const override { return "gmwb"; }
    double contractual_amount(const EventContext& ctx, StatePoint pre) const override;
    double max_withdrawal(const EventContext& ctx, StatePoint pre) const override;
    JumpResult jump(const EventContext& ctx, StatePoint pre, double gamma) const override;
    double maturity_payoff(const EventContext& ctx, StatePoint pre) const override;
    bool homogeneous() const override { return config_.variant == GmwbVariant::basic; }

    double cashflow(const EventContext& ctx, double base, double gamma, double contractual) const;
    const GmwbConfig& config() const { return config_; }

private:
    StatePoint ratchet_before(const EventContext& ctx, StatePoint pre) const;

    GmwbConfig config_;
};

// ---------------------------------------------------------------- GLWB

struct GlwbConfig {
    double withdrawal_rate = 0.05;  // g: G_n = g·A(t_n⁻)·dt_n
    double bonus = 0.0;             // b_n per event without withdrawal
    double penalty = 0.0;           // β
    bool ratchet = true;
};

class GlwbRider final : public Rider {
public:
    explicit GlwbRider(GlwbConfig config, DeathBenefitType death = DeathBenefitType::wealth);

    std::string name() const override { return "glwb"; }
    double contractual_amount(const EventContext& ctx, StatePoint pre) const override;
    double max_withdrawal(const EventContext& ctx, StatePoint pre) const override;
    JumpResult jump(const EventContext& ctx, StatePoint pre, double gamma) const override;
    // Remaining wealth is paid out at the terminal age.
    double maturity_payoff(const EventContext&, StatePoint pre) const override {
        return pre.wealth;
    }
    bool homogeneous() const override { return true; }

    const GlwbConfig& config() const { return config_; }

private:
    GlwbConfig config_;
};

// ---------------------------------------------------------------- GMIB

struct GmibConfig {
    double annuity_ratio = 1.0;  // ä_T / ä_g
    double rollup = 0.0;         // base growth per event
    bool ratchet = false;
};

double gmib_payoff(double annuity_ratio, double wealth, double base);

class GmibRider final : public Rider {
public:
    explicit GmibRider(GmibConfig config, DeathBenefitType death = DeathBenefitType::wealth);

    std::string name() const override { return "gmib"; }
    double contractual_amount(const EventContext&, StatePoint) const override { return 0.0; }
    double max_withdrawal(const EventContext&, StatePoint) const override { return 0.0; }
    JumpResult jump(const EventContext& ctx, StatePoint pre, double gamma) const override;
    double maturity_payoff(const EventContext& ctx, StatePoint pre) const override;
    bool homogeneous() const override { return true; }

private:
    GmibConfig config_;
};

// ---------------------------------------------------------------- GMDB

struct GmdbConfig {
    DeathBenefitType type = DeathBenefitType::max_base_wealth;
    bool ratchet = true;  // base tracks anniversary highs (type 0)
    double rollup = 0.0;
};

// Pays the account at maturity and D_n on death; no withdrawals.
class GmdbRider final : public Rider {
public:
    explicit GmdbRider(GmdbConfig config);

    std::string name() const override { return "gmdb"; }
    double contractual_amount(const EventContext&, StatePoint) const override { return 0.0; }
    double max_withdrawal(const EventContext&, StatePoint) const override { return 0.0; }
    JumpResult jump(const EventContext& ctx, StatePoint pre, double gamma) const override;
    double maturity_payoff(const EventContext&, StatePoint pre) const override {
        return pre.wealth;
    }

private:
    GmdbConfig config_;
};

// ---------------------------------------------------------------- plain account

// No guarantee: pays the wealth account at maturity. Useful as a martingale check.
class PlainAccount final : public Rider {
public:
    PlainAccount() : Rider(DeathBenefitType::wealth) {}

    std::string name() const override { return "none"; }
    double contractual_amount(const EventContext&, StatePoint) const override { return 0.0; }
    double max_withdrawal(const EventContext&, StatePoint) const override { return 0.0; }
    JumpResult jump(const EventContext&, StatePoint pre, double gamma) const override;
    double maturity_payoff(const EventContext&, StatePoint pre) const override {
        return pre.wealth;
    }
    bool homogeneous() const override { return true; }
};

}  // namespace gmxb
