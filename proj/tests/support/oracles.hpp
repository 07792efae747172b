#pragma once

#include <cmath>

namespace gmxb::testing {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

struct BsInputs {
    double spot;
    double strike;
    double rate;
    double vol;
    double maturity;
    double yield = 0.0;
};

inline double bs_d1(const BsInputs& p) {
    return (std::log(p.spot / p.strike) + (p.rate - p.yield + 0.5 * p.vol * p.vol) * p.maturity) /
           (p.vol * std::sqrt(p.maturity));
}

inline double bs_put(const BsInputs& p) {
    const double d1 = bs_d1(p);
    const double d2 = d1 - p.vol * std::sqrt(p.maturity);
    return p.strike * std::exp(-p.rate * p.maturity) * norm_cdf(-d2) -
           p.spot * std::exp(-p.yield * p.maturity) * norm_cdf(-d1);
}

inline double bs_put_delta(const BsInputs& p) {
    return -std::exp(-p.yield * p.maturity) * norm_cdf(-bs_d1(p));
}

inline double bs_gamma(const BsInputs& p) {
    return std::exp(-p.yield * p.maturity) * norm_pdf(bs_d1(p)) /
           (p.spot * p.vol * std::sqrt(p.maturity));
}

inline double bs_vega(const BsInputs& p) {
    return p.spot * std::exp(-p.yield * p.maturity) * norm_pdf(bs_d1(p)) * std::sqrt(p.maturity);
}

inline double bs_put_rho(const BsInputs& p) {
    const double d2 = bs_d1(p) - p.vol * std::sqrt(p.maturity);
    return -p.strike * p.maturity * std::exp(-p.rate * p.maturity) * norm_cdf(-d2);
}

// GMAB without ratchet or withdrawals: e^{−rT}·E[max(W_T, A)] with W paying
// the fee as a dividend yield.
inline double gmab_closed_form(double w0, double a0, double rate, double vol, double maturity,
                               double fee) {
    return w0 * std::exp(-fee * maturity) + bs_put({w0, a0, rate, vol, maturity, fee});
}

}  // namespace gmxb::testing
