#include "gmxb/solver/ghqc.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>

#include "gmxb/errors.hpp"
#include "gmxb/numerics/spline.hpp"

namespace gmxb {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrtPi = 1.7724538509055159;

FirstPeriod period_moments(const Contract& contract, std::size_t n) {
    const auto& mk = contract.market;
    const double dt = mk.dt(n);
    const double s = mk.vol(n);
    FirstPeriod p;
    p.mean = (mk.rate(n) - lattice_fee_rate(contract.fee, dt) - 0.5 * s * s) * dt;
    p.stdev = s * std::sqrt(dt);
    p.discount = std::exp(-mk.rate(n) * dt);
    return p;
}

// Convolution weights that integrate a cubic spline on a uniform grid exactly
// against the normal density N(mean, stdev²) of the log-return. The value at
// node m is Σ_r cy[r]·y[m+lo+r] + cl[r]·dl[m+lo+r] + cr[r]·dr[m+lo+r], where
// dl and dr hold the second derivative at the left and right end of each cell.
struct ExactKernel {
    long lo = 0;
    std::vector<double> cy;
    std::vector<double> cl;
    std::vector<double> cr;
};

// ∫₀¹ t^k f(t) dt for k = 0..3, f the N(m, s²) density.
void cell_moments(double m, double s, double p[4]) {
    if (s >= 1.0) {
        // Smooth on the cell: 16-point Gauss-Legendre is exact to rounding.
        static const Quadrature gl = [] {
            Quadrature g;
            g.order = 16;
            const double x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
            const double w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
            for (int i = 0; i < 8; ++i) {
                g.nodes.push_back(0.5 - 0.5 * x[i]);
                g.weights.push_back(0.5 * w[i]);
                g.nodes.push_back(0.5 + 0.5 * x[i]);
                g.weights.push_back(0.5 * w[i]);
            }
            return g;
        }();
        p[0] = p[1] = p[2] = p[3] = 0.0;
        for (int i = 0; i < gl.order; ++i) {
            const double t = gl.nodes[i];
            const double z = (t - m) / s;
            const double f = gl.weights[i] * std::exp(-0.5 * z * z) / (s * 2.5066282746310002);
            p[0] += f;
            p[1] += f * t;
            p[2] += f * t * t;
            p[3] += f * t * t * t;
        }
        return;
    }
    const double a = -m / s;
    const double b = (1.0 - m) / s;
    // Φ(b) − Φ(a) without cancellation in the upper tail.
    p[0] = a > 0.0 ? 0.5 * (std::erfc(a / kSqrt2) - std::erfc(b / kSqrt2))
                   : 0.5 * (std::erfc(-b / kSqrt2) - std::erfc(-a / kSqrt2));
    const double f0 = std::exp(-0.5 * a * a) / (s * 2.5066282746310002);
    const double f1 = std::exp(-0.5 * b * b) / (s * 2.5066282746310002);
    const double v = s * s;
    p[1] = m * p[0] - v * (f1 - f0);
    p[2] = m * p[1] + v * p[0] - v * f1;
    p[3] = m * p[2] + 2.0 * v * p[1] - v * f1;
}

ExactKernel exact_kernel(double mean, double stdev, double h) {
    constexpr double kTail = 9.0;
    ExactKernel k;
    const long r_lo = static_cast<long>(std::floor((mean - kTail * stdev) / h));
    const long r_hi = static_cast<long>(std::floor((mean + kTail * stdev) / h));
    k.lo = r_lo;
    const auto n = static_cast<std::size_t>(r_hi - r_lo + 1);
    k.cy.assign(n + 1, 0.0);
    k.cl.assign(n, 0.0);
    k.cr.assign(n, 0.0);
    const double h2_6 = h * h / 6.0;
    const double st = stdev / h;
    double mass = 0.0;
    for (long r = r_lo; r <= r_hi; ++r) {
        double p[4];
        cell_moments(mean / h - static_cast<double>(r), st, p);
        const auto i = static_cast<std::size_t>(r - r_lo);
        k.cy[i] += p[0] - p[1];
        k.cy[i + 1] += p[1];
        k.cl[i] = (-2.0 * p[1] + 3.0 * p[2] - p[3]) * h2_6;
        k.cr[i] = (p[3] - p[1]) * h2_6;
        mass += p[0];
    }
    for (auto& c : k.cy) c /= mass;
    for (auto& c : k.cl) c /= mass;
    for (auto& c : k.cr) c /= mass;
    return k;
}

}  // namespace

namespace {

// Row and cell data padded on both sides so every kernel offset is valid:
// constant below W₀, linear continuation above W_M, zero curvature outside.
void pad_row(const double* y, const SliceCells& cells, std::size_t nw, double h, std::size_t pad,
             std::vector<double>& py, std::vector<double>& pl, std::vector<double>& pr) {
    const std::size_t last = nw - 1;
    const double slope = cells.end_slope(y, nw, h);
    py.assign(nw + 2 * pad, 0.0);
    pl.assign(nw + 2 * pad, 0.0);
    pr.assign(nw + 2 * pad, 0.0);
    for (std::size_t i = 0; i < pad; ++i) py[i] = y[0];
    for (std::size_t i = 0; i < nw; ++i) py[pad + i] = y[i];
    for (std::size_t c = 0; c < last; ++c) {
        pl[pad + c] = cells.dl[c];
        pr[pad + c] = cells.dr[c];
    }
    for (std::size_t i = 1; i <= pad; ++i) py[pad + last + i] = y[last] + slope * h * static_cast<double>(i);
}

std::size_t kernel_pad(const ExactKernel& k) {
    const auto width = static_cast<long>(k.cy.size());
    return static_cast<std::size_t>(std::max<long>(-k.lo, 0) + std::max<long>(k.lo + width, 0) + 1);
}

double apply_kernel(const ExactKernel& k, const std::vector<double>& py, const std::vector<double>& pl,
                    const std::vector<double>& pr, std::size_t start) {
    const std::size_t cells = k.cl.size();
    double sum = k.cy[cells] * py[start + cells];
    for (std::size_t r = 0; r < cells; ++r) {
        sum += k.cy[r] * py[start + r] + k.cl[r] * pl[start + r] + k.cr[r] * pr[start + r];
    }
    return sum;
}

void exact_continuation(const Surface& integrand, const Lattice& lattice, double mean, double stdev,
                        double disc, bool split, Surface& out) {
    const std::size_t nw = lattice.w_size();
    const double h = lattice.dx();
    const ExactKernel k = exact_kernel(mean, stdev, h);
    const std::size_t pad = kernel_pad(k);
    SliceCells cells;
    std::vector<double> py, pl, pr;
    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        const double* y = integrand.row(j);
        cells.build(y, nw, h, split ? lattice.diagonal_node(j) : -1);
        pad_row(y, cells, nw, h, pad, py, pl, pr);
        double* o = out.row(j);
        for (std::size_t m = 0; m < nw; ++m) {
            const std::size_t start = static_cast<std::size_t>(static_cast<long>(pad + m) + k.lo);
            o[m] = disc * apply_kernel(k, py, pl, pr, start);
        }
    }
}

void quadrature_continuation(const Surface& integrand, const Lattice& lattice, double mean,
                             double stdev, double disc, const Quadrature& quadrature, bool split,
                             Surface& out) {
    const std::size_t nw = lattice.w_size();
    const std::size_t last = nw - 1;
    const double h = lattice.dx();

    // Every node sees the same shifts in ln W, so the cell offsets and
    // spline coefficients are shared across the grid.
    const int q = quadrature.order;
    std::vector<long> cell(q);
    std::vector<double> t(q), ca(q), cb(q), wt(q);
    const double h2_6 = h * h / 6.0;
    for (int i = 0; i < q; ++i) {
        const double pos = (mean + kSqrt2 * stdev * quadrature.nodes[i]) / h;
        const double k = std::floor(pos);
        cell[i] = static_cast<long>(k);
        t[i] = pos - k;
        const double a = 1.0 - t[i];
        const double b = t[i];
        ca[i] = (a * a * a - a) * h2_6;
        cb[i] = (b * b * b - b) * h2_6;
        wt[i] = disc * quadrature.weights[i] / kSqrtPi;
    }

    SliceCells cells;
    for (std::size_t j = 0; j < lattice.a_size(); ++j) {
        const double* y = integrand.row(j);
        cells.build(y, nw, h, split ? lattice.diagonal_node(j) : -1);
        const double slope_end = cells.end_slope(y, nw, h);
        double* o = out.row(j);
        for (std::size_t m = 0; m < nw; ++m) {
            double sum = 0.0;
            for (int i = 0; i < q; ++i) {
                const long c = static_cast<long>(m) + cell[i];
                double v;
                if (c < 0) {
                    v = y[0];
                } else if (c >= static_cast<long>(last)) {
                    v = y[last] + slope_end * (static_cast<double>(c - static_cast<long>(last)) + t[i]) * h;
                } else {
                    const auto k = static_cast<std::size_t>(c);
                    v = (1.0 - t[i]) * y[k] + t[i] * y[k + 1] + ca[i] * cells.dl[k] + cb[i] * cells.dr[k];
                }
                sum += wt[i] * v;
            }
            o[m] = sum;
        }
    }
}

}  // namespace

void ghqc_continuation(const Surface& integrand, const Lattice& lattice, const MarketModel& market,
                       const FeeStructure& fee, std::size_t n, const Quadrature& quadrature,
                       Surface& out, Integration integration, bool split_kinks) {
    const double dt = market.dt(n);
    const double sigma = market.vol(n);
    const double mean = (market.rate(n) - lattice_fee_rate(fee, dt) - 0.5 * sigma * sigma) * dt;
    const double stdev = sigma * std::sqrt(dt);
    const double disc = std::exp(-market.rate(n) * dt);
    out = Surface(lattice);
    // A degenerate density is a point mass, which any quadrature rule integrates exactly.
    if (integration == Integration::exact_spline && stdev > 0.0) {
        exact_continuation(integrand, lattice, mean, stdev, disc, split_kinks, out);
    } else {
        quadrature_continuation(integrand, lattice, mean, stdev, disc, quadrature, split_kinks, out);
    }
}

Solution ghqc_solve(const Contract& contract, const Lattice& lattice, const Quadrature& quadrature,
                    ValueMode mode, Integration integration, bool split_kinks) {
    contract.validate();
    const std::size_t events = contract.market.events();

    Surface current;
    EventWeights w = event_weights(contract, mode, events);
    terminal_surface(contract, lattice, w.cash, current);
    fold_mortality(contract, lattice, events, w, current);
    check_finite(current, lattice, "terminal condition", events);

    Surface post;
    for (std::size_t n = events; n >= 2; --n) {
        ghqc_continuation(current, lattice, contract.market, contract.fee, n, quadrature, post,
                          integration, split_kinks);
        check_finite(post, lattice, "continuation", n - 1);
        w = event_weights(contract, mode, n - 1);
        apply_jump(contract, lattice, n - 1, w.cash, post, current);
        fold_mortality(contract, lattice, n - 1, w, current);
        check_finite(current, lattice, "jump", n - 1);
    }

    Solution sol;
    sol.lattice = lattice;
    sol.quadrature = quadrature;
    sol.integration = integration;
    sol.split_kinks = split_kinks;
    sol.first = period_moments(contract, 1);
    ghqc_continuation(current, lattice, contract.market, contract.fee, 1, quadrature, sol.initial,
                      integration, split_kinks);
    sol.integrand = std::move(current);
    return sol;
}

std::vector<Solution::Sample> Solution::first_period_samples(double wealth, double base) const {
    if (quadrature.order == 0) throw UnsupportedError("solution: no quadrature attached");
    std::vector<Sample> out(static_cast<std::size_t>(quadrature.order));
    const long j = lattice.find_base(base);
    std::function<double(double)> eval;
    if (j >= 0) {
        const auto row = static_cast<std::size_t>(j);
        eval = [spline = SliceSpline(lattice, integrand.row(row), split_kinks ? lattice.diagonal_node(row) : -1)](double w) {
            return spline(w);
        };
    } else {
        auto interp = std::make_shared<SurfaceInterpolator>(lattice, integrand);
        eval = [interp, base](double w) { return (*interp)(w, base); };
    }
    for (int i = 0; i < quadrature.order; ++i) {
        Sample& s = out[static_cast<std::size_t>(i)];
        s.z = kSqrt2 * quadrature.nodes[i];
        s.weight = quadrature.weights[i] / kSqrtPi;
        s.value = first.discount * eval(wealth * std::exp(first.mean + first.stdev * s.z));
    }
    return out;
}

double Solution::value_at(double wealth, double base) const {
    const std::size_t nw = lattice.w_size();
    const double h = lattice.dx();
    const double x = wealth > 0.0 ? std::max(std::log(wealth), lattice.x0()) : lattice.x0();
    const double pos = (x - lattice.x0()) / h;
    if (integration == Integration::exact_spline && first.stdev > 0.0 &&
        pos <= static_cast<double>(nw - 1)) {
        std::vector<double> row(nw);
        const long j = lattice.find_base(base);
        if (j >= 0) {
            const double* src = integrand.row(static_cast<std::size_t>(j));
            row.assign(src, src + nw);
        } else {
            const SurfaceInterpolator interp(lattice, integrand);
            for (std::size_t m = 0; m < nw; ++m) row[m] = interp(lattice.wealth(m), base);
        }
        auto m = static_cast<std::size_t>(pos);
        if (m > nw - 2) m = nw - 2;
        const double frac = pos - static_cast<double>(m);
        const ExactKernel k = exact_kernel(first.mean + frac * h, first.stdev, h);
        const std::size_t pad = kernel_pad(k);
        SliceCells cells;
        cells.build(row.data(), nw, h,
                    j >= 0 && split_kinks ? lattice.diagonal_node(static_cast<std::size_t>(j)) : -1);
        std::vector<double> py, pl, pr;
        pad_row(row.data(), cells, nw, h, pad, py, pl, pr);
        const std::size_t start = static_cast<std::size_t>(static_cast<long>(pad + m) + k.lo);
        return first.discount * apply_kernel(k, py, pl, pr, start);
    }
    if (quadrature.order > 0) {
        double sum = 0.0;
        for (const auto& s : first_period_samples(wealth, base)) sum += s.weight * s.value;
        return sum;
    }
    const long j = lattice.find_base(base);
    if (j >= 0) {
        const auto row = static_cast<std::size_t>(j);
        return SliceSpline(lattice, initial.row(row), split_kinks ? lattice.diagonal_node(row) : -1)(wealth);
    }
    return SurfaceInterpolator(lattice, initial)(wealth, base);
}

namespace {

PricingResult run(const Contract& contract, const GhqcConfig& config, double w0, double a0,
                  ValueMode mode, const char* label) {
    const auto start = std::chrono::steady_clock::now();
    const Lattice lattice = Lattice::build(config.lattice, contract.market, contract.premium);
    const Solution sol = ghqc_solve(contract, lattice, gauss_hermite(config.quadrature_order), mode,
                                    config.integration, config.split_kinks);
    PricingResult r;
    r.value = sol.value_at(w0, a0);
    r.method = label;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace

PricingResult ghqc_price(const Contract& contract, const GhqcConfig& config, double w0, double a0) {
    return run(contract, config, w0, a0, ValueMode::conditional, "ghqc");
}

PricingResult ghqc_price(const Contract& contract, const GhqcConfig& config) {
    return ghqc_price(contract, config, contract.premium, contract.premium);
}

PricingResult ghqc_price_mortality_averaged(const Contract& contract, const GhqcConfig& config,
                                            double w0, double a0) {
    return run(contract, config, w0, a0, ValueMode::mortality_weighted, "ghqc-psi");
}

}  // namespace gmxb
