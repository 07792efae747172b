#pragma once

#include <cstddef>

#include "gmxb/solver/backward.hpp"
#include "gmxb/solver/contract.hpp"
#include "gmxb/solver/ghqc.hpp"
#include "gmxb/solver/lattice.hpp"

namespace gmxb {

// Time discretization between two event dates.
struct FdScheme {
    int steps_per_interval = 40;
    double theta = 0.5;     // 0.5 is Crank-Nicolson, 1 is fully implicit
    int rannacher_steps = 2;  // fully implicit steps right after each event

    void validate() const;
};

struct PdeConfig {
    LatticeSpec lattice;
    FdScheme scheme;
};

/// Solves Q_t + ½σ²Q_xx + (r − α − ½σ²)Q_x − rQ = 0 in x = ln W backward over
/// (t_{n−1}, t_n] for every A-slice, starting from `integrand` at t_n.
///
/// The lowest node is discounted only and the top node assumes Q is linear
/// in W. Convection is upwinded where central differences would lose
/// positivity; with σ = 0 the solution is transported along characteristics.
void pde_continuation(const Surface& integrand, const Lattice& lattice, const MarketModel& market,
                      const FeeStructure& fee, std::size_t n, const FdScheme& scheme, Surface& out);

// The backward recursion with pde_continuation between events. The returned
// solution carries no quadrature, so value_at interpolates the t₀ surface.
Solution pde_solve(const Contract& contract, const Lattice& lattice, const FdScheme& scheme,
                   ValueMode mode = ValueMode::conditional);

PricingResult pde_price(const Contract& contract, const PdeConfig& config, double w0, double a0);
PricingResult pde_price(const Contract& contract, const PdeConfig& config);

}  // namespace gmxb
