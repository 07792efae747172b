#include "gmxb/model/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmxb/errors.hpp"

namespace gmxb {

MarketModel::MarketModel(std::vector<double> times, std::vector<double> rates,
                         std::vector<double> vols, std::vector<bool> ratchet)
    : times_(std::move(times)),
      rates_(std::move(rates)),
      vols_(std::move(vols)),
      ratchet_(std::move(ratchet)) {
    if (times_.size() < 2) throw ParameterError("market: need at least one event period");
    if (times_.front() != 0.0) throw ParameterError("market: t0 must be 0");
    const std::size_t n = times_.size() - 1;
    if (rates_.size() != n || vols_.size() != n || ratchet_.size() != n) {
        throw ParameterError("market: rates, vols and ratchet flags need one entry per period");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw ParameterError("market: event times must be strictly increasing");
        }
    }
    for (double s : vols_) {
        if (!(s >= 0.0)) throw ParameterError("market: volatilities must be non-negative");
    }
}

MarketModel MarketModel::uniform(double maturity, int events, double rate, double vol,
                                 int ratchet_every) {
    if (events < 1) throw ParameterError("market: need at least one event");
    if (!(maturity > 0.0)) throw ParameterError("market: maturity must be positive");
    std::vector<double> times(static_cast<std::size_t>(events) + 1);
    for (int i = 0; i <= events; ++i) times[i] = maturity * i / events;
    times.back() = maturity;
    std::vector<bool> ratchet(static_cast<std::size_t>(events), false);
    if (ratchet_every > 0) {
        for (int n = ratchet_every; n <= events; n += ratchet_every) ratchet[n - 1] = true;
    }
    return MarketModel(std::move(times), std::vector<double>(events, rate),
                       std::vector<double>(events, vol), std::move(ratchet));
}

double MarketModel::log_return_mean() const {
    double m = 0.0;
    for (std::size_t n = 1; n <= events(); ++n) m += (rate(n) - 0.5 * vol(n) * vol(n)) * dt(n);
    return m;
}

double MarketModel::log_return_stdev() const {
    double v = 0.0;
    for (std::size_t n = 1; n <= events(); ++n) v += vol(n) * vol(n) * dt(n);
    return std::sqrt(v);
}

MarketModel MarketModel::with_rate_shift(double dr) const {
    MarketModel m = *this;
    for (auto& r : m.rates_) r += dr;
    return m;
}

MarketModel MarketModel::with_vol_shift(double dsigma) const {
    MarketModel m = *this;
    for (auto& s : m.vols_) s = std::max(0.0, s + dsigma);
    return m;
}

double discount(const MarketModel& model, std::size_t i, std::size_t j) {
    if (i > j) throw ParameterError("discount: need i <= j");
    if (j > model.events()) throw ParameterError("discount: index beyond maturity");
    double acc = 0.0;
    for (std::size_t k = i + 1; k <= j; ++k) acc += model.rate(k) * model.dt(k);
    return std::exp(-acc);
}

double wealth_step(const MarketModel& model, const FeeStructure& fee, std::size_t n,
                   double wealth_prev_post, double z) {
    const double dt = model.dt(n);
    const double s = model.vol(n);
    const double drift = (model.rate(n) - fee.continuous_rate() - 0.5 * s * s) * dt;
    return wealth_prev_post * std::exp(drift + s * std::sqrt(dt) * z);
}

double apply_fee_deduction(const FeeStructure& fee, double dt, double wealth_minus,
                           double base_minus) {
    switch (fee.kind) {
        case FeeKind::continuous:
            return wealth_minus;
        case FeeKind::discrete_on_wealth:
            return wealth_minus * (1.0 - fee.rate * dt);
        case FeeKind::discrete_on_base:
            return std::max(wealth_minus - base_minus * fee.rate * dt, 0.0);
    }
    return wealth_minus;
}

double discrete_to_continuous_rate(double discrete_rate, double dt) {
    return -std::log1p(-discrete_rate * dt) / dt;
}

double continuous_to_discrete_rate(double continuous_rate, double dt) {
    return -std::expm1(-continuous_rate * dt) / dt;
}

}  // namespace gmxb
