#pragma once

#include <cstddef>
#include <vector>

#include "gmxb/solver/contract.hpp"
#include "gmxb/solver/lattice.hpp"

namespace gmxb {

// Which value function the backward recursion carries.
enum class ValueMode {
    conditional,        // Q: value given survival to the current time
    mortality_weighted  // Ψ: survival probabilities folded into the cashflows
};

/// Weights applied at event n.
///
/// The pre-event surface is J = max_γ (cash·f̃ + V⁺∘h), and the integrand
/// handed to the continuation is survive·J + death·D_n.
struct EventWeights {
    double cash = 1.0;
    double survive = 1.0;
    double death = 0.0;
};

EventWeights event_weights(const Contract& contract, ValueMode mode, std::size_t n);

// Lattice slices at an event are indexed by wealth net of a discrete fee on
// wealth, so that fee moves into the drift of the period before the event and
// the jump reads the post-fee wealth straight off the nodes.
double lattice_fee_rate(const FeeStructure& fee, double dt);
// Wealth entering the jump at a node: the node itself, less any fee on the base.
double lattice_net_wealth(const FeeStructure& fee, double dt, double node_wealth, double base);
// W(t_n⁻) before any fee for a node.
double lattice_gross_wealth(const FeeStructure& fee, double dt, double node_wealth);

// Terminal pre-event surface cash_N·P_T(W after fee, A).
void terminal_surface(const Contract& contract, const Lattice& lattice, double cash, Surface& out);

/// Applies the jump condition at event n with n < N.
///
/// `post` is the value just after the event. For each node the admissible
/// withdrawals are scored and the best one (by the strategy) is kept. If
/// `policy` is non-null it receives the chosen γ per node.
void apply_jump(const Contract& contract, const Lattice& lattice, std::size_t n, double cash,
                const Surface& post, Surface& pre, Surface* policy = nullptr);

// In place: J ← survive·J + death·D_n(W, A), with D evaluated before fees.
void fold_mortality(const Contract& contract, const Lattice& lattice, std::size_t n,
                    const EventWeights& w, Surface& surface);

// Withdrawal candidates for the optimal scan: K points on [0, γ_max] plus G when inside.
void withdrawal_candidates(double gamma_max, double contractual, int count, std::vector<double>& out);

}  // namespace gmxb
