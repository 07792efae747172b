#pragma once

#include <cstddef>
#include <vector>

#include "gmxb/numerics/quadrature.hpp"
#include "gmxb/solver/backward.hpp"
#include "gmxb/solver/contract.hpp"
#include "gmxb/solver/lattice.hpp"

namespace gmxb {

// How the one-period expectation of a spline-interpolated slice is taken.
enum class Integration {
    gauss_hermite,  // q-point Gauss-Hermite rule on the spline
    exact_spline    // closed-form integral of the cubic spline against the normal density
};

struct GhqcConfig {
    LatticeSpec lattice;
    int quadrature_order = 9;
    Integration integration = Integration::exact_spline;
    // Split each slice's W-spline at the diagonal node W = A, where ratchets
    // and the maturity payoff leave a kink.
    bool split_kinks = true;
};

// Log-return moments and discount factor of the first period (t₀, t₁].
struct FirstPeriod {
    double mean = 0.0;
    double stdev = 0.0;
    double discount = 1.0;
};

/// Result of one backward induction.
///
/// Keeps the integrand at t₁ (survival- and death-weighted, undiscounted) so
/// the value, its W-derivatives and seasoned starting points can be evaluated
/// without re-running the recursion.
struct Solution {
    Lattice lattice;
    Surface integrand;  // at t₁
    Surface initial;    // value at t₀ on every node
    FirstPeriod first;
    Quadrature quadrature;  // order 0: interpolate `initial` instead of integrating
    Integration integration = Integration::gauss_hermite;
    bool split_kinks = true;

    // Value at t₀ for an arbitrary state.
    double value_at(double wealth, double base) const;

    struct Sample {
        double z;       // standard normal abscissa
        double weight;  // quadrature weight, summing to one
        double value;   // discounted integrand at W·exp(mean + stdev·z)
    };
    // Quadrature samples of the first-period expectation. Requires a quadrature.
    std::vector<Sample> first_period_samples(double wealth, double base) const;
};

/// Expectation over period n, node by node, of a slice interpolated by a
/// natural cubic spline in ln W. With Gauss-Hermite integration
/// out(W_m, A_j) = B·Σᵢ wᵢ·I(ψ(W_m, zᵢ), A_j).
void ghqc_continuation(const Surface& integrand, const Lattice& lattice, const MarketModel& market,
                       const FeeStructure& fee, std::size_t n, const Quadrature& quadrature,
                       Surface& out, Integration integration = Integration::gauss_hermite,
                       bool split_kinks = true);

Solution ghqc_solve(const Contract& contract, const Lattice& lattice, const Quadrature& quadrature,
                    ValueMode mode = ValueMode::conditional,
                    Integration integration = Integration::gauss_hermite,
                    bool split_kinks = true);

// Q₀(W0, A0) on the default lattice for the contract.
PricingResult ghqc_price(const Contract& contract, const GhqcConfig& config, double w0, double a0);
PricingResult ghqc_price(const Contract& contract, const GhqcConfig& config);

// Ψ₀(W0, A0): the mortality-weighted recursion.
PricingResult ghqc_price_mortality_averaged(const Contract& contract, const GhqcConfig& config,
                                            double w0, double a0);

}  // namespace gmxb
