#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gmxb/model/market.hpp"
#include "gmxb/model/mortality.hpp"
#include "gmxb/riders/rider.hpp"

namespace gmxb {

// A pre-determined withdrawal amount as a function of the event state.
struct WithdrawalRule {
    enum class Kind {
        none,                  // γ = 0
        wealth_fraction,       // γ = value·W(t_n⁻) after fees
        contractual_multiple,  // γ = value·G_n
        fixed_amount,          // γ = value
        maximum                // γ = γ_max
    };
    Kind kind = Kind::none;
    double value = 0.0;

    static WithdrawalRule nothing() { return {}; }
    static WithdrawalRule wealth_fraction(double f) { return {Kind::wealth_fraction, f}; }
    static WithdrawalRule contractual(double k = 1.0) { return {Kind::contractual_multiple, k}; }
    static WithdrawalRule fixed(double amount) { return {Kind::fixed_amount, amount}; }
};

/// Policyholder behaviour at the event dates.
///
/// Static rules are clamped to the admissible interval. The optimal strategy
/// maximizes over `candidates` equally spaced withdrawals on [0, γ_max] plus
/// G_n. The threshold strategy withdraws min(G_n, γ_max) unless the optimum
/// beats it by more than θ·G_n.
struct StrategySpec {
    enum class Kind { static_rule, optimal, threshold };

    Kind kind = Kind::static_rule;
    std::vector<WithdrawalRule> rules{WithdrawalRule{}};  // one per event, or one for all
    double theta = 0.0;
    int candidates = 101;

    static StrategySpec none() { return {}; }
    static StrategySpec fixed(WithdrawalRule rule) {
        StrategySpec s;
        s.rules = {rule};
        return s;
    }
    static StrategySpec optimal(int candidates = 101) {
        StrategySpec s;
        s.kind = Kind::optimal;
        s.candidates = candidates;
        return s;
    }
    static StrategySpec threshold(double theta, int candidates = 101) {
        StrategySpec s;
        s.kind = Kind::threshold;
        s.theta = theta;
        s.candidates = candidates;
        return s;
    }

    const WithdrawalRule& rule(std::size_t n) const;
    bool is_static() const { return kind == Kind::static_rule; }
    void validate() const;
};

// γ prescribed by a static rule, clamped to [0, γ_max].
double static_withdrawal(const WithdrawalRule& rule, double wealth, double contractual,
                         double gamma_max);

/// Everything that defines one priced contract.
struct Contract {
    RiderPtr rider;
    MarketModel market;
    FeeStructure fee;
    MortalityModel mortality;  // empty means no deaths
    StrategySpec strategy;
    double premium = 1.0;

    double death_probability(std::size_t n) const {
        return mortality.events() == 0 ? 0.0 : mortality.q(n);
    }
    double survival(std::size_t n) const {
        return mortality.events() == 0 ? 1.0 : mortality.p(n);
    }
    EventContext event(std::size_t n) const;
    // Throws ParameterError on inconsistent sizes or a missing rider.
    void validate() const;
    Contract with_fee_rate(double rate) const {
        Contract c = *this;
        c.fee.rate = rate;
        return c;
    }
};

struct PricingResult {
    double value = 0.0;
    double std_error = 0.0;  // Monte Carlo only
    double seconds = 0.0;
    std::string method;
};

}  // namespace gmxb
