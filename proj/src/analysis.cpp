#include "gmxb/analysis/analysis.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "gmxb/errors.hpp"
#include "gmxb/numerics/roots.hpp"

namespace gmxb {

std::string to_string(Method m) {
    switch (m) {
        case Method::ghqc: return "ghqc";
        case Method::pde: return "pde";
        case Method::mc: return "mc";
    }
    return "ghqc";
}

Method method_from_string(const std::string& name) {
    if (name == "ghqc") return Method::ghqc;
    if (name == "pde") return Method::pde;
    if (name == "mc") return Method::mc;
    throw ParameterError("unknown solver method '" + name + "' (expected ghqc, pde or mc)");
}

PricingResult price(const Contract& contract, const SolverSettings& solver, double w0, double a0) {
    switch (solver.method) {
        case Method::ghqc: return ghqc_price(contract, solver.ghqc, w0, a0);
        case Method::pde: return pde_price(contract, solver.pde, w0, a0);
        case Method::mc: return mc_price(contract, solver.mc, w0, a0);
    }
    throw ParameterError("price: unknown method");
}

PricingResult price(const Contract& contract, const SolverSettings& solver) {
    return price(contract, solver, contract.premium, contract.premium);
}

FairFeeResult fair_fee(const Contract& contract, const FairFeeRequest& request) {
    if (!(request.lower >= 0.0 && request.upper > request.lower &&
          request.max_upper >= request.upper)) {
        throw ParameterError("fair_fee: need 0 <= lower < upper <= max_upper");
    }
    if (!(request.tolerance > 0.0)) throw ParameterError("fair_fee: tolerance must be positive");
    const auto start = std::chrono::steady_clock::now();
    const double w0 = contract.premium;

    struct Point {
        double excess;
        double std_error;
    };
    std::map<double, Point> cache;
    auto excess = [&](double rate) {
        auto it = cache.find(rate);
        if (it == cache.end()) {
            const PricingResult r = price(contract.with_fee_rate(rate), request.solver);
            if (!std::isfinite(r.value)) throw NumericalError("fair_fee: non-finite price");
            it = cache.emplace(rate, Point{r.value - w0, r.std_error}).first;
        }
        return it->second.excess;
    };

    double lo = request.lower;
    double hi = request.upper;
    bool bracketed = false;
    double f_lo = 0.0;
    double f_hi = 0.0;
    if (request.guess && *request.guess > 0.0) {
        const double g = *request.guess;
        const double g_lo = std::max(request.lower, g * (1.0 - request.guess_width));
        const double g_hi = std::min(request.max_upper, g * (1.0 + request.guess_width));
        const double e_lo = excess(g_lo);
        const double e_hi = excess(g_hi);
        if (e_lo >= 0.0 && e_hi <= 0.0) {
            lo = g_lo;
            hi = g_hi;
            f_lo = e_lo;
            f_hi = e_hi;
            bracketed = true;
        } else if (e_hi > 0.0) {
            lo = g_hi;
            hi = std::max(request.upper, g_hi);
        } else {
            hi = g_lo;
        }
    }
    if (!bracketed) {
        f_lo = excess(lo);
        if (f_lo < -1e-12 * w0) {
            std::ostringstream msg;
            msg << "fair_fee: contract is worth less than the premium at fee " << lo
                << " (guarantee worthless or bracket too small)";
            throw BracketError(msg.str());
        }
        f_hi = excess(hi);
        while (f_hi > 0.0 && hi < request.max_upper) {
            lo = hi;
            f_lo = f_hi;
            hi = std::min(2.0 * hi, request.max_upper);
            f_hi = excess(hi);
        }
        if (f_hi > 0.0) {
            std::ostringstream msg;
            msg << "fair_fee: contract still worth more than the premium at fee " << hi
                << " (bracket too small)";
            throw BracketError(msg.str());
        }
    }

    FairFeeResult out;
    // A root at the lower end shows up as rounding noise around zero.
    if (std::abs(f_lo) <= 1e-12 * w0) {
        out.rate = lo;
    } else {
        out.rate = find_root(excess, lo, f_lo, hi, f_hi, request.tolerance).root;
    }
    out.residual = excess(out.rate);
    out.evaluations = static_cast<int>(cache.size());

    // Slope of Q₀ in the fee from the nearest evaluated neighbours.
    const auto here = cache.find(out.rate);
    const double se = here->second.std_error;
    if (se > 0.0) {
        auto below = here == cache.begin() ? here : std::prev(here);
        auto above = std::next(here) == cache.end() ? here : std::next(here);
        if (below != above) {
            const double slope = (above->second.excess - below->second.excess) / (above->first - below->first);
            if (slope != 0.0) out.std_error = se / std::abs(slope);
        }
    }

    const double dt = contract.market.events() > 0 ? contract.market.dt(1) : 0.0;
    out.continuous_equivalent = contract.fee.kind == FeeKind::discrete_on_wealth
                                    ? discrete_to_continuous_rate(out.rate, dt)
                                    : out.rate;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Greeks delta_gamma_likelihood(const Solution& solution, double w0, double a0) {
    const double s = solution.first.stdev;
    if (!(s > 0.0)) throw UnsupportedError("likelihood Greeks need a non-degenerate first period");
    if (!(w0 > 0.0)) throw ParameterError("likelihood Greeks need W0 > 0");
    Greeks g;
    double d = 0.0;
    double gm = 0.0;
    for (const auto& p : solution.first_period_samples(w0, a0)) {
        const double v = p.weight * p.value;
        d += v * p.z;
        gm += v * (p.z * p.z - 1.0 - s * p.z);
    }
    g.value = solution.value_at(w0, a0);
    g.delta = d / (w0 * s);
    g.gamma = gm / (w0 * w0 * s * s);
    return g;
}

Greeks greeks_bump(const Contract& contract, const GhqcConfig& config, double w0, double a0,
                   const BumpSizes& bumps) {
    if (!(bumps.wealth_rel > 0.0 && bumps.rate > 0.0 && bumps.vol > 0.0)) {
        throw ParameterError("greeks_bump: bump sizes must be positive");
    }
    const Lattice lattice = Lattice::build(config.lattice, contract.market, contract.premium);
    const Quadrature quad = gauss_hermite(config.quadrature_order);
    auto solve = [&](const Contract& c) {
        return ghqc_solve(c, lattice, quad, ValueMode::conditional, config.integration,
                          config.split_kinks);
    };

    Greeks g;
    const Solution base = solve(contract);
    const double h = bumps.wealth_rel * w0;
    const double v_up = base.value_at(w0 + h, a0);
    const double v_dn = base.value_at(w0 - h, a0);
    g.value = base.value_at(w0, a0);
    g.delta = (v_up - v_dn) / (2.0 * h);
    g.gamma = (v_up - 2.0 * g.value + v_dn) / (h * h);

    auto shifted = [&](MarketModel m) {
        Contract c = contract;
        c.market = std::move(m);
        return solve(c).value_at(w0, a0);
    };
    g.rho = (shifted(contract.market.with_rate_shift(bumps.rate)) -
             shifted(contract.market.with_rate_shift(-bumps.rate))) /
            (2.0 * bumps.rate);
    g.vega = (shifted(contract.market.with_vol_shift(bumps.vol)) -
              shifted(contract.market.with_vol_shift(-bumps.vol))) /
             (2.0 * bumps.vol);
    return g;
}

double hedge_units(double delta_w, double wealth, double asset_price) {
    if (!(asset_price > 0.0)) throw ParameterError("hedge_units: asset price must be positive");
    return (delta_w - 1.0) * wealth / asset_price;
}

}  // namespace gmxb
