#include "gmxb/solver/pde.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "gmxb/errors.hpp"
#include "gmxb/numerics/roots.hpp"

namespace gmxb {

void FdScheme::validate() const {
    if (steps_per_interval < 1) throw ParameterError("pde: steps per interval must be at least 1");
    if (!(theta >= 0.5 && theta <= 1.0)) throw ParameterError("pde: theta must lie in [0.5, 1]");
    if (rannacher_steps < 0) throw ParameterError("pde: Rannacher step count must be non-negative");
}

namespace {

// Spatial operator coefficients at interior nodes: (LV)_i = a·V_{i−1} + b·V_i + c·V_{i+1}.
struct Operator {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double a_top = 0.0;  // top row after eliminating the ghost node
    double b_top = 0.0;
};

Operator build_operator(double sigma, double mu, double r, double h) {
    const double d = 0.5 * sigma * sigma / (h * h);
    const double v = mu / (2.0 * h);
    Operator op;
    if (d >= std::abs(v)) {
        op.a = d - v;
        op.c = d + v;
    } else if (mu > 0.0) {
        op.a = d;
        op.c = d + 2.0 * v;
    } else {
        op.a = d - 2.0 * v;
        op.c = d;
    }
    op.b = -op.a - op.c - r;
    // Linear in W above the grid: V_{M+1} = (1 + e^h)·V_M − e^h·V_{M−1}.
    const double eh = std::exp(h);
    op.a_top = op.a - op.c * eh;
    op.b_top = op.b + op.c * (1.0 + eh);
    return op;
}

void transport(const Surface& integrand, const Lattice& lattice, double shift, double disc,
               Surface& out) {
    const double growth = std::exp(shift);
    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        const SliceSpline spline(lattice, integrand.row(j), lattice.diagonal_node(j));
        double* o = out.row(j);
        for (std::size_t m = 0; m < lattice.w_size(); ++m) {
            o[m] = disc * spline(lattice.wealth(m) * growth);
        }
    }
}

}  // namespace

void pde_continuation(const Surface& integrand, const Lattice& lattice, const MarketModel& market,
                      const FeeStructure& fee, std::size_t n, const FdScheme& scheme, Surface& out) {
    scheme.validate();
    const double dt = market.dt(n);
    const double sigma = market.vol(n);
    const double r = market.rate(n);
    const double mu = r - lattice_fee_rate(fee, dt) - 0.5 * sigma * sigma;
    out = Surface(lattice);
    if (sigma == 0.0) {
        transport(integrand, lattice, mu * dt, std::exp(-r * dt), out);
        return;
    }

    const std::size_t nw = lattice.w_size();
    const std::size_t top = nw - 1;
    const double h = lattice.dx();
    const double step = dt / scheme.steps_per_interval;
    const double bottom_disc = std::exp(-r * step);
    const Operator op = build_operator(sigma, mu, r, h);

    std::vector<double> sub(nw), diag(nw), sup(nw), rhs(nw), scratch(nw);
    auto assemble_lhs = [&](double th) {
        const double k = th * step;
        sub[0] = 0.0;
        diag[0] = 1.0;
        sup[0] = 0.0;
        for (std::size_t i = 1; i < top; ++i) {
            sub[i] = -k * op.a;
            diag[i] = 1.0 - k * op.b;
            sup[i] = -k * op.c;
        }
        sub[top] = -k * op.a_top;
        diag[top] = 1.0 - k * op.b_top;
        sup[top] = 0.0;
    };

    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        double* v = out.row(j);
        const double* src = integrand.row(j);
        std::copy(src, src + nw, v);
        double assembled = -1.0;
        for (int s = 0; s < scheme.steps_per_interval; ++s) {
            const double th = s < scheme.rannacher_steps ? 1.0 : scheme.theta;
            if (th != assembled) {
                assemble_lhs(th);
                assembled = th;
            }
            const double e = (1.0 - th) * step;
            rhs[0] = bottom_disc * v[0];
            for (std::size_t i = 1; i < top; ++i) {
                rhs[i] = v[i] + e * (op.a * v[i - 1] + op.b * v[i] + op.c * v[i + 1]);
            }
            rhs[top] = v[top] + e * (op.a_top * v[top - 1] + op.b_top * v[top]);
            tridiag_solve_into(sub, diag, sup, rhs, std::span<double>(v, nw), scratch);
        }
    }
}

Solution pde_solve(const Contract& contract, const Lattice& lattice, const FdScheme& scheme,
                   ValueMode mode) {
    contract.validate();
    scheme.validate();
    const std::size_t events = contract.market.events();

    Surface current;
    EventWeights w = event_weights(contract, mode, events);
    terminal_surface(contract, lattice, w.cash, current);
    fold_mortality(contract, lattice, events, w, current);
    check_finite(current, lattice, "terminal condition", events);

    Surface post;
    for (std::size_t n = events; n >= 2; --n) {
        pde_continuation(current, lattice, contract.market, contract.fee, n, scheme, post);
        check_finite(post, lattice, "pde interval", n - 1);
        w = event_weights(contract, mode, n - 1);
        apply_jump(contract, lattice, n - 1, w.cash, post, current);
        fold_mortality(contract, lattice, n - 1, w, current);
        check_finite(current, lattice, "jump", n - 1);
    }

    Solution sol;
    sol.lattice = lattice;
    sol.first.stdev = 0.0;
    pde_continuation(current, lattice, contract.market, contract.fee, 1, scheme, sol.initial);
    check_finite(sol.initial, lattice, "pde interval", 0);
    sol.integrand = std::move(current);
    return sol;
}

PricingResult pde_price(const Contract& contract, const PdeConfig& config, double w0, double a0) {
    const auto start = std::chrono::steady_clock::now();
    const Lattice lattice = Lattice::build(config.lattice, contract.market, contract.premium);
    const Solution sol = pde_solve(contract, lattice, config.scheme);
    PricingResult r;
    r.value = sol.value_at(w0, a0);
    r.method = "pde";
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

PricingResult pde_price(const Contract& contract, const PdeConfig& config) {
    return pde_price(contract, config, contract.premium, contract.premium);
}

}  // namespace gmxb
