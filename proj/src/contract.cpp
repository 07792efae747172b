#include "gmxb/solver/contract.hpp"

#include <algorithm>
#include <cmath>

#include "gmxb/errors.hpp"

namespace gmxb {

const WithdrawalRule& StrategySpec::rule(std::size_t n) const {
    if (rules.empty()) {
        static const WithdrawalRule kNone{};
        return kNone;
    }
    return rules.size() == 1 ? rules.front() : rules.at(n - 1);
}

void StrategySpec::validate() const {
    if (!(theta >= 0.0)) throw ParameterError("strategy: theta must be >= 0");
    if (kind != Kind::static_rule && candidates < 2) {
        throw ParameterError("strategy: need at least 2 withdrawal candidates");
    }
    for (const auto& r : rules) {
        if (!std::isfinite(r.value) || r.value < 0.0) {
            throw ParameterError("strategy: withdrawal rule values must be finite and >= 0");
        }
    }
}

double static_withdrawal(const WithdrawalRule& rule, double wealth, double contractual,
                         double gamma_max) {
    double g = 0.0;
    switch (rule.kind) {
        case WithdrawalRule::Kind::none:
            g = 0.0;
            break;
        case WithdrawalRule::Kind::wealth_fraction:
            g = rule.value * wealth;
            break;
        case WithdrawalRule::Kind::contractual_multiple:
            g = rule.value * contractual;
            break;
        case WithdrawalRule::Kind::fixed_amount:
            g = rule.value;
            break;
        case WithdrawalRule::Kind::maximum:
            g = gamma_max;
            break;
    }
    return std::clamp(g, 0.0, std::max(gamma_max, 0.0));
}

EventContext Contract::event(std::size_t n) const {
    EventContext ctx;
    ctx.n = n;
    ctx.time = market.time(n);
    ctx.dt = market.dt(n);
    ctx.maturity = market.maturity();
    ctx.ratchet = market.is_ratchet(n);
    ctx.premium = premium;
    return ctx;
}

void Contract::validate() const {
    if (!rider) throw ParameterError("contract: rider missing");
    if (market.events() == 0) throw ParameterError("contract: market has no events");
    if (mortality.events() != 0 && mortality.events() != market.events()) {
        throw ParameterError("contract: mortality needs one probability per event");
    }
    if (!(premium > 0.0)) throw ParameterError("contract: premium must be positive");
    if (!std::isfinite(fee.rate)) throw ParameterError("contract: fee rate must be finite");
    if (fee.kind != FeeKind::continuous) {
        for (std::size_t n = 1; n <= market.events(); ++n) {
            if (fee.rate * market.dt(n) >= 1.0) {
                throw ParameterError("contract: discrete fee exceeds the account");
            }
        }
    }
    strategy.validate();
    if (strategy.rules.size() > 1 && strategy.rules.size() != market.events()) {
        throw ParameterError("strategy: per-event rules need one entry per event");
    }
}

}  // namespace gmxb
