#include "gmxb/solver/backward.hpp"

#include <algorithm>

#include "gmxb/errors.hpp"

namespace gmxb {

EventWeights event_weights(const Contract& contract, ValueMode mode, std::size_t n) {
    const double q = contract.death_probability(n);
    EventWeights w;
    if (mode == ValueMode::conditional) {
        w.cash = 1.0;
        w.survive = 1.0 - q;
        w.death = q;
    } else {
        w.cash = contract.survival(n);
        w.survive = 1.0;
        w.death = contract.survival(n - 1) * q;
    }
    return w;
}

double lattice_fee_rate(const FeeStructure& fee, double dt) {
    switch (fee.kind) {
        case FeeKind::continuous:
            return fee.rate;
        case FeeKind::discrete_on_wealth:
            return discrete_to_continuous_rate(fee.rate, dt);
        case FeeKind::discrete_on_base:
            return 0.0;
    }
    return 0.0;
}

double lattice_net_wealth(const FeeStructure& fee, double dt, double node_wealth, double base) {
    return fee.kind == FeeKind::discrete_on_base ? apply_fee_deduction(fee, dt, node_wealth, base)
                                                 : node_wealth;
}

double lattice_gross_wealth(const FeeStructure& fee, double dt, double node_wealth) {
    return fee.kind == FeeKind::discrete_on_wealth ? node_wealth / (1.0 - fee.rate * dt) : node_wealth;
}

void terminal_surface(const Contract& contract, const Lattice& lattice, double cash,
                      Surface& out) {
    const std::size_t n = contract.market.events();
    const EventContext ctx = contract.event(n);
    out = Surface(lattice);
    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        const double a = lattice.base(j);
        for (std::size_t m = 0; m < lattice.w_size(); ++m) {
            const double wf = lattice_net_wealth(contract.fee, ctx.dt, lattice.wealth(m), a);
            out.at(j, m) = cash * contract.rider->maturity_payoff(ctx, StatePoint{wf, a});
        }
    }
}

void withdrawal_candidates(double gamma_max, double contractual, int count,
                           std::vector<double>& out) {
    out.clear();
    if (!(gamma_max > 0.0)) {
        out.push_back(0.0);
        return;
    }
    const int k = std::max(count, 2);
    bool g_inserted = !(contractual > 0.0 && contractual < gamma_max);
    for (int i = 0; i < k; ++i) {
        const double g = i == k - 1 ? gamma_max : gamma_max * static_cast<double>(i) / (k - 1);
        if (!g_inserted && contractual <= g) {
            if (contractual < g) out.push_back(contractual);
            g_inserted = true;
        }
        out.push_back(g);
    }
}

void apply_jump(const Contract& contract, const Lattice& lattice, std::size_t n, double cash,
                const Surface& post, Surface& pre, Surface* policy) {
    const Rider& rider = *contract.rider;
    const StrategySpec& strategy = contract.strategy;
    const EventContext ctx = contract.event(n);
    const SurfaceInterpolator interp(lattice, post);
    pre = Surface(lattice);
    if (policy) *policy = Surface(lattice);
    std::vector<double> candidates;

    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        const double a = lattice.base(j);
        for (std::size_t m = 0; m < lattice.w_size(); ++m) {
            const double w = lattice.wealth(m);
            const StatePoint state{lattice_net_wealth(contract.fee, ctx.dt, w, a), a};

            auto score = [&](double gamma) {
                const JumpResult r = rider.jump(ctx, state, gamma);
                double v;
                if (r.post.base == a) {
                    v = r.post.wealth == w ? post.at(j, m) : interp.row_value(j, r.post.wealth);
                } else {
                    v = interp(r.post.wealth, r.post.base);
                }
                return cash * r.cashflow + v;
            };

            const double g_n = rider.contractual_amount(ctx, state);
            const double g_max = rider.max_withdrawal(ctx, state);
            if (g_max < 0.0) throw ContractError("jump: empty admissible withdrawal set");

            double best_gamma = 0.0;
            double best = 0.0;
            if (strategy.kind == StrategySpec::Kind::static_rule) {
                best_gamma = static_withdrawal(strategy.rule(n), state.wealth, g_n, g_max);
                best = score(best_gamma);
            } else {
                withdrawal_candidates(g_max, g_n, strategy.candidates, candidates);
                best_gamma = candidates.front();
                best = score(best_gamma);
                for (std::size_t k = 1; k < candidates.size(); ++k) {
                    const double v = score(candidates[k]);
                    if (v > best) {
                        best = v;
                        best_gamma = candidates[k];
                    }
                }
                if (strategy.kind == StrategySpec::Kind::threshold) {
                    const double g_default = std::min(g_n, g_max);
                    const double v_default = score(g_default);
                    if (!(best - v_default > strategy.theta * g_n)) {
                        best = v_default;
                        best_gamma = g_default;
                    }
                }
            }
            pre.at(j, m) = best;
            if (policy) policy->at(j, m) = best_gamma;
        }
    }
}

void fold_mortality(const Contract& contract, const Lattice& lattice, std::size_t n,
                    const EventWeights& w, Surface& surface) {
    if (w.survive == 1.0 && w.death == 0.0) return;
    const EventContext ctx = contract.event(n);
    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        const double a = lattice.base(j);
        for (std::size_t m = 0; m < lattice.w_size(); ++m) {
            double& v = surface.at(j, m);
            v *= w.survive;
            if (w.death != 0.0) {
                const double gross = lattice_gross_wealth(contract.fee, ctx.dt, lattice.wealth(m));
                v += w.death * contract.rider->death_benefit(ctx, StatePoint{gross, a});
            }
        }
    }
}

}  // namespace gmxb
