#pragma once

#include <optional>
#include <string>

#include "gmxb/solver/contract.hpp"
#include "gmxb/solver/ghqc.hpp"
#include "gmxb/solver/mc.hpp"
#include "gmxb/solver/pde.hpp"

namespace gmxb {

enum class Method { ghqc, pde, mc };

std::string to_string(Method m);
Method method_from_string(const std::string& name);  // throws ParameterError

// Which solver prices a contract, with the settings of each.
struct SolverSettings {
    Method method = Method::ghqc;
    GhqcConfig ghqc;
    PdeConfig pde;
    McConfig mc;
};

PricingResult price(const Contract& contract, const SolverSettings& solver, double w0, double a0);
PricingResult price(const Contract& contract, const SolverSettings& solver);

// ------------------------------------------------------------- fair fee

struct FairFeeRequest {
    SolverSettings solver;
    double lower = 0.0;       // bracket in annual fee rate
    double upper = 0.20;
    double max_upper = 0.50;  // the upper end is widened up to here before giving up
    double tolerance = 1e-6;  // on the fee rate
    // Optional starting estimate; a bracket of ±guess_width (relative) around
    // it is tried first.
    std::optional<double> guess;
    double guess_width = 0.05;
};

struct FairFeeResult {
    double rate = 0.0;                   // in the contract's fee kind
    double continuous_equivalent = 0.0;  // α_d for fees on wealth, else equal to rate
    double residual = 0.0;               // Q₀(rate) − W0
    double std_error = 0.0;              // Monte Carlo: value error mapped through the slope
    int evaluations = 0;
    double seconds = 0.0;
};

/// Fee rate at which Q₀(W0, W0) = W0.
///
/// Q₀ is evaluated at most once per rate. Throws BracketError when no sign
/// change is found up to `max_upper`, meaning the guarantee is worthless at
/// zero fee or costs more than the widest bracket allows.
FairFeeResult fair_fee(const Contract& contract, const FairFeeRequest& request);

// --------------------------------------------------------------- Greeks

// Sensitivities of the contract value Q; the guarantee U = Q − W shares all
// of them except Delta, which is lower by one.
struct Greeks {
    double value = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double rho = 0.0;
    double vega = 0.0;

    double guarantee_delta() const { return delta - 1.0; }
};

// Delta and Gamma in W0 by weighting the first-period quadrature samples of
// `solution` with the likelihood-ratio factors of the lognormal transition.
Greeks delta_gamma_likelihood(const Solution& solution, double w0, double a0);

struct BumpSizes {
    double wealth_rel = 1e-3;
    double rate = 1e-4;
    double vol = 1e-3;
};

// Central differences: W bumps reuse one solution, rate and volatility bumps
// re-solve on the unbumped lattice. Runs on GHQC with `config`.
Greeks greeks_bump(const Contract& contract, const GhqcConfig& config, double w0, double a0,
                   const BumpSizes& bumps = {});

// Units of a traded asset S that hedge the guarantee: (∂Q/∂W − 1)·W/S.
double hedge_units(double delta_w, double wealth, double asset_price);

}  // namespace gmxb
