#include "gmxb/riders/riders.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmxb/errors.hpp"

namespace gmxb {

double gmdb_benefit(DeathBenefitType type, double wealth, double base, double premium) {
    switch (type) {
        case DeathBenefitType::none:
            return 0.0;
        case DeathBenefitType::max_base_wealth:
            return std::max(base, wealth);
        case DeathBenefitType::premium:
            return premium;
        case DeathBenefitType::max_premium_wealth:
            return std::max(premium, wealth);
        case DeathBenefitType::wealth:
            return wealth;
    }
    return 0.0;
}

void Rider::check_admissible(double gamma, double gamma_max, const char* who) {
    const double slack = 1e-12 * std::max(1.0, std::abs(gamma_max));
    if (!(gamma >= -slack) || gamma > gamma_max + slack) {
        throw ContractError(std::string(who) + ": withdrawal " + std::to_string(gamma) +
                            " outside [0, " + std::to_string(gamma_max) + "]");
    }
}

namespace {

double clamp_withdrawal(double gamma, double gamma_max) {
    return std::clamp(gamma, 0.0, std::max(gamma_max, 0.0));
}

}  // namespace

// ---------------------------------------------------------------- GMAB

double gmab_penalty(GmabAccount account, double wealth, double base, double gamma,
                    double contractual) {
    if (gamma < 0.0 || gamma > wealth * (1.0 + 1e-12) + 1e-300) {
        throw ContractError("gmab: withdrawal outside [0, W]");
    }
    if (gamma == 0.0 || wealth <= 0.0) return 0.0;
    if (wealth >= base) return gamma;
    if (account == GmabAccount::pension && gamma <= contractual) return gamma;
    return base * gamma / wealth;
}

GmabRider::GmabRider(GmabConfig config, DeathBenefitType death)
    : Rider(death), config_(config) {
    if (config_.withdrawal_limit < 0.0) throw ParameterError("gmab: withdrawal limit must be >= 0");
}

double GmabRider::contractual_amount(const EventContext& ctx, StatePoint pre) const {
    return config_.withdrawal_limit * pre.wealth * ctx.dt;
}

double GmabRider::max_withdrawal(const EventContext&, StatePoint pre) const {
    return std::max(pre.wealth, 0.0);
}

JumpResult GmabRider::jump(const EventContext& ctx, StatePoint pre, double gamma) const {
    const double gmax = max_withdrawal(ctx, pre);
    check_admissible(gamma, gmax, "gmab");
    gamma = clamp_withdrawal(gamma, gmax);
    JumpResult out;
    out.cashflow = gamma;
    out.post.wealth = std::max(pre.wealth - gamma, 0.0);
    if (gamma >= pre.wealth && pre.wealth > 0.0) {
        // Full surrender extinguishes the guarantee.
        out.post.base = 0.0;
        return out;
    }
    const double c = gmab_penalty(config_.account, pre.wealth, pre.base, gamma,
                                  contractual_amount(ctx, pre));
    const double level = (config_.ratchet && ctx.ratchet) ? std::max(pre.base, pre.wealth)
                                                          : pre.base;
    out.post.base = std::max(level - c, 0.0);
    return out;
}

double GmabRider::maturity_payoff(const EventContext&, StatePoint pre) const {
    return std::max(pre.wealth, pre.base);
}

// ---------------------------------------------------------------- GMWB

double gmwb_spec_jump(GmwbVariant variant, double wealth, double base, double gamma,
                      double contractual) {
    if (gamma <= contractual) return std::max(base - gamma, 0.0);
    const double w_after = std::max(wealth - gamma, 0.0);
    switch (variant) {
        case GmwbVariant::basic:
            return std::max(base - gamma, 0.0);
        case GmwbVariant::spec1:
            if (wealth <= 0.0) return 0.0;
            return std::max(std::min(base - gamma, base * w_after / wealth), 0.0);
        case GmwbVariant::spec2:
            return std::max(std::min(base - gamma, w_after), 0.0);
        case GmwbVariant::spec3:
            if (wealth <= contractual) return 0.0;
            return std::max(base - contractual, 0.0) * w_after / (wealth - contractual);
    }
    return 0.0;
}

GmwbRider::GmwbRider(GmwbConfig config, DeathBenefitType death)
    : Rider(death), config_(config) {
    if (config_.penalty < 0.0 || config_.penalty > 1.0 || config_.excess_penalty < 0.0 ||
        config_.excess_penalty > 1.0 || config_.early_penalty < 0.0 ||
        config_.early_penalty > 1.0) {
        throw ParameterError("gmwb: penalties must lie in [0, 1]");
    }
    if (config_.withdrawal_rate < 0.0) throw ParameterError("gmwb: withdrawal rate must be >= 0");
}

StatePoint GmwbRider::ratchet_before(const EventContext& ctx, StatePoint pre) const {
    if (config_.ratchet == RatchetTiming::before_withdrawal && ctx.ratchet) {
        pre.base = std::max(pre.base, pre.wealth);
    }
    return pre;
}

double GmwbRider::contractual_amount(const EventContext& ctx, StatePoint pre) const {
    if (config_.variant == GmwbVariant::basic) {
        if (!(ctx.maturity > 0.0)) throw ParameterError("gmwb: maturity must be positive");
        return ctx.premium * ctx.dt / ctx.maturity;
    }
    return config_.withdrawal_rate * ratchet_before(ctx, pre).base * ctx.dt;
}

double GmwbRider::max_withdrawal(const EventContext& ctx, StatePoint pre) const {
    const StatePoint adj = ratchet_before(ctx, pre);
    if (config_.variant == GmwbVariant::basic) return std::max(adj.base, 0.0);
    const double g = contractual_amount(ctx, pre);
    return std::max(adj.wealth, std::min(adj.base, g));
}

double GmwbRider::cashflow(const EventContext& ctx, double base, double gamma,
                           double contractual) const {
    if (config_.variant == GmwbVariant::basic) {
        if (gamma <= contractual) return gamma;
        return contractual + (1.0 - config_.penalty) * (gamma - contractual);
    }
    const double excess = config_.excess_penalty * std::max(gamma - std::min(base, contractual), 0.0);
    const bool early = config_.entry_age + ctx.time < config_.early_age;
    const double early_charge = early ? config_.early_penalty * (gamma - excess) : 0.0;
    return gamma - excess - early_charge;
}

JumpResult GmwbRider::jump(const EventContext& ctx, StatePoint pre, double gamma) const {
    const double gmax = max_withdrawal(ctx, pre);
    check_admissible(gamma, gmax, "gmwb");
    gamma = clamp_withdrawal(gamma, gmax);
    const StatePoint adj = ratchet_before(ctx, pre);
    const double g = contractual_amount(ctx, pre);

    JumpResult out;
    out.post.wealth = std::max(adj.wealth - gamma, 0.0);
    out.post.base = config_.variant == GmwbVariant::basic
                        ? std::max(adj.base - gamma, 0.0)
                        : gmwb_spec_jump(config_.variant, adj.wealth, adj.base, gamma, g);
    if (config_.ratchet == RatchetTiming::after_withdrawal && ctx.ratchet) {
        out.post.base = std::max(out.post.base, out.post.wealth);
    }
    out.cashflow = cashflow(ctx, adj.base, gamma, g);
    return out;
}

double GmwbRider::maturity_payoff(const EventContext& ctx, StatePoint pre) const {
    const StatePoint adj = ratchet_before(ctx, pre);
    const double g = contractual_amount(ctx, pre);
    const double take_all = std::max(adj.base, 0.0);
    return std::max(adj.wealth, cashflow(ctx, adj.base, take_all, g));
}

// ---------------------------------------------------------------- GLWB

GlwbRider::GlwbRider(GlwbConfig config, DeathBenefitType death)
    : Rider(death), config_(config) {
    if (config_.withdrawal_rate < 0.0) throw ParameterError("glwb: withdrawal rate must be >= 0");
    if (config_.penalty < 0.0 || config_.penalty > 1.0) {
        throw ParameterError("glwb: penalty must lie in [0, 1]");
    }
}

double GlwbRider::contractual_amount(const EventContext& ctx, StatePoint pre) const {
    return config_.withdrawal_rate * pre.base * ctx.dt;
}

double GlwbRider::max_withdrawal(const EventContext& ctx, StatePoint pre) const {
    return std::max(pre.wealth, contractual_amount(ctx, pre));
}

JumpResult GlwbRider::jump(const EventContext& ctx, StatePoint pre, double gamma) const {
    const double gmax = max_withdrawal(ctx, pre);
    check_admissible(gamma, gmax, "glwb");
    gamma = clamp_withdrawal(gamma, gmax);
    const double g = contractual_amount(ctx, pre);
    const bool ratchet = config_.ratchet && ctx.ratchet;
    const double w_after = std::max(pre.wealth - gamma, 0.0);

    JumpResult out;
    out.post.wealth = w_after;
    if (gamma == 0.0) {
        out.post.base = std::max(pre.base * (1.0 + config_.bonus), ratchet ? pre.wealth : 0.0);
        out.cashflow = 0.0;
    } else if (gamma <= g) {
        out.post.base = std::max(pre.base, ratchet ? w_after : 0.0);
        out.cashflow = gamma;
    } else {
        const double scaled = pre.wealth > g ? pre.base * w_after / (pre.wealth - g) : 0.0;
        out.post.base = std::max(scaled, ratchet ? w_after : 0.0);
        out.cashflow = g + (1.0 - config_.penalty) * (gamma - g);
    }
    return out;
}

// ---------------------------------------------------------------- GMIB

double gmib_payoff(double annuity_ratio, double wealth, double base) {
    return std::max(wealth, annuity_ratio * base);
}

GmibRider::GmibRider(GmibConfig config, DeathBenefitType death)
    : Rider(death), config_(config) {
    if (!(config_.annuity_ratio >= 0.0)) throw ParameterError("gmib: annuity ratio must be >= 0");
}

JumpResult GmibRider::jump(const EventContext& ctx, StatePoint pre, double gamma) const {
    check_admissible(gamma, 0.0, "gmib");
    JumpResult out;
    out.post.wealth = pre.wealth;
    out.post.base = std::max(pre.base * (1.0 + config_.rollup),
                             (config_.ratchet && ctx.ratchet) ? pre.wealth : 0.0);
    return out;
}

double GmibRider::maturity_payoff(const EventContext&, StatePoint pre) const {
    return gmib_payoff(config_.annuity_ratio, pre.wealth, pre.base);
}

// ---------------------------------------------------------------- GMDB

GmdbRider::GmdbRider(GmdbConfig config) : Rider(config.type), config_(config) {}

JumpResult GmdbRider::jump(const EventContext& ctx, StatePoint pre, double gamma) const {
    check_admissible(gamma, 0.0, "gmdb");
    JumpResult out;
    out.post.wealth = pre.wealth;
    out.post.base = std::max(pre.base * (1.0 + config_.rollup),
                             (config_.ratchet && ctx.ratchet) ? pre.wealth : 0.0);
    return out;
}

// ---------------------------------------------------------------- plain account

JumpResult PlainAccount::jump(const EventContext&, StatePoint pre, double gamma) const {
    check_admissible(gamma, 0.0, "none");
    return JumpResult{pre, 0.0};
}

}  // namespace gmxb
