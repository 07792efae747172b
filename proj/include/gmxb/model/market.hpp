#pragma once

#include <cstddef>
#include <vector>

namespace gmxb {

/// Risk-neutral GBM market with piecewise-constant parameters.
///
/// Period n (1-based) spans (t_{n-1}, t_n] and carries rate r_n and
/// volatility σ_n. Event times are t_1 … t_N; ratchet dates are flagged
/// per event.
class MarketModel {
public:
    MarketModel() = default;

    // times = {t₀ = 0, t₁, …, t_N}; rates/vols have N entries; ratchet has N flags.
    MarketModel(std::vector<double> times, std::vector<double> rates, std::vector<double> vols,
                std::vector<bool> ratchet);

    // N equally spaced events over [0, maturity]; every `ratchet_every`-th event is a ratchet date
    // (0 disables ratchets).
    static MarketModel uniform(double maturity, int events, double rate, double vol,
                               int ratchet_every);

    std::size_t events() const { return rates_.size(); }
    double maturity() const { return times_.back(); }
    double time(std::size_t n) const { return times_[n]; }
    double dt(std::size_t n) const { return times_[n] - times_[n - 1]; }
    double rate(std::size_t n) const { return rates_[n - 1]; }
    double vol(std::size_t n) const { return vols_[n - 1]; }
    bool is_ratchet(std::size_t n) const { return ratchet_[n - 1]; }
    const std::vector<double>& times() const { return times_; }

    // Mean and standard deviation of ln(S(T)/S(0)).
    double log_return_mean() const;
    double log_return_stdev() const;

    MarketModel with_rate_shift(double dr) const;
    MarketModel with_vol_shift(double dsigma) const;

private:
    std::vector<double> times_;
    std::vector<double> rates_;
    std::vector<double> vols_;
    std::vector<bool> ratchet_;
};

enum class FeeKind { continuous, discrete_on_wealth, discrete_on_base };

struct FeeStructure {
    FeeKind kind = FeeKind::continuous;
    double rate = 0.0;  // annualized fraction

    static FeeStructure continuous(double alpha) { return {FeeKind::continuous, alpha}; }
    static FeeStructure on_wealth(double alpha) { return {FeeKind::discrete_on_wealth, alpha}; }
    static FeeStructure on_base(double alpha) { return {FeeKind::discrete_on_base, alpha}; }

    // Drift reduction inside a period (zero for discrete fees).
    double continuous_rate() const { return kind == FeeKind::continuous ? rate : 0.0; }
};

// B_{i,j} = exp(−Σ r_k dt_k) over periods i+1 … j. Throws ParameterError if i > j.
double discount(const MarketModel& model, std::size_t i, std::size_t j);

// W(t_n⁻) from W(t_{n-1}⁺) and a standard normal draw z.
double wealth_step(const MarketModel& model, const FeeStructure& fee, std::size_t n,
                   double wealth_prev_post, double z);

// Wealth after the discrete fee charged at an event of length dt; identity for continuous fees.
double apply_fee_deduction(const FeeStructure& fee, double dt, double wealth_minus,
                           double base_minus);

// α_d = −ln(1 − α̃ dt)/dt: continuous rate equivalent to a discrete per-period charge.
double discrete_to_continuous_rate(double discrete_rate, double dt);
double continuous_to_discrete_rate(double continuous_rate, double dt);

}  // namespace gmxb
