#pragma once

#include <cstddef>
#include <memory>
#include <string>

namespace gmxb {

// Wealth account W and benefit base A at one side of an event time.
struct StatePoint {
    double wealth = 0.0;
    double base = 0.0;
};

// Everything a rider needs to know about the event at t_n.
struct EventContext {
    std::size_t n = 0;       // 1-based event index
    double time = 0.0;       // t_n in years
    double dt = 0.0;         // t_n − t_{n−1}
    double maturity = 0.0;   // T
    bool ratchet = false;    // t_n is a ratchet date
    double premium = 0.0;    // W(0)
};

struct JumpResult {
    StatePoint post;
    double cashflow = 0.0;
};

enum class DeathBenefitType { none = -1, max_base_wealth = 0, premium = 1, max_premium_wealth = 2, wealth = 3 };

// Death benefit D_n(W⁻, A⁻) for the standard benefit types 0–3; `none` pays nothing.
double gmdb_benefit(DeathBenefitType type, double wealth, double base, double premium);

/// Contract specification consumed by every solver.
///
/// A rider defines the contractual amount G_n, the admissible withdrawal
/// interval [0, γ_max], the jump (W⁻, A⁻, γ) → (W⁺, A⁺) together with the
/// cashflow paid to the policyholder, the maturity payoff and the death
/// benefit. The wealth passed to `jump` and `maturity_payoff` is already net
/// of any discrete fee charged at the event.
class Rider {
public:
    virtual ~Rider() = default;

    virtual std::string name() const = 0;
    virtual double contractual_amount(const EventContext& ctx, StatePoint pre) const = 0;
    virtual double max_withdrawal(const EventContext& ctx, StatePoint pre) const = 0;
    // Throws ContractError when γ lies outside the admissible interval.
    virtual JumpResult jump(const EventContext& ctx, StatePoint pre, double gamma) const = 0;
    virtual double maturity_payoff(const EventContext& ctx, StatePoint pre) const = 0;

    double death_benefit(const EventContext& ctx, StatePoint pre) const {
        return gmdb_benefit(death_type_, pre.wealth, pre.base, ctx.premium);
    }
    DeathBenefitType death_benefit_type() const { return death_type_; }
    void set_death_benefit(DeathBenefitType type) { death_type_ = type; }

    // Jump maps scale linearly with (W, A, γ, G_n).
    virtual bool homogeneous() const { return false; }

protected:
    explicit Rider(DeathBenefitType death) : death_type_(death) {}

    // Rejects γ outside [0, γ_max] (a relative slack of 1e-12 absorbs rounding).
    static void check_admissible(double gamma, double gamma_max, const char* who);

private:
    DeathBenefitType death_type_;
};

using RiderPtr = std::shared_ptr<const Rider>;

}  // namespace gmxb
