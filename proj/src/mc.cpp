#include "gmxb/solver/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "gmxb/errors.hpp"

namespace gmxb {

void McConfig::validate() const {
    if (paths < 1) throw ParameterError("mc: path count must be at least 1");
    if (batch_size < 1) throw ParameterError("mc: batch size must be at least 1");
    if (threads < 1) throw ParameterError("mc: thread count must be at least 1");
}

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ batch);
}

namespace {

// Per-event quantities that do not depend on the path.
struct EventPlan {
    EventContext ctx;
    double mean = 0.0;
    double stdev = 0.0;
    double free_mean = 0.0;   // log-return mean without the fee
    double disc = 1.0;        // B(0, t_n)
    double cash_weight = 1.0;   // p_n
    double death_weight = 0.0;  // p_{n−1}·q_n
};

class PathPricer {
public:
    PathPricer(const Contract& contract, double w0, double a0) : c_(contract), w0_(w0), a0_(a0) {
        const auto& mk = contract.market;
        const std::size_t events = mk.events();
        double log_disc = 0.0;
        for (std::size_t n = 1; n <= events; ++n) {
            EventPlan e;
            e.ctx = contract.event(n);
            const double dt = mk.dt(n);
            const double s = mk.vol(n);
            e.mean = (mk.rate(n) - contract.fee.continuous_rate() - 0.5 * s * s) * dt;
            e.stdev = s * std::sqrt(dt);
            e.free_mean = (mk.rate(n) - 0.5 * s * s) * dt;
            log_disc -= mk.rate(n) * dt;
            e.disc = std::exp(log_disc);
            e.cash_weight = contract.survival(n);
            e.death_weight = contract.survival(n - 1) * contract.death_probability(n);
            plan_.push_back(e);
        }
    }

    std::size_t events() const { return plan_.size(); }

    // Discounted, survival-weighted payoff of one path with shocks z[0..N−1]
    // multiplied by `sign`. `control` receives the discounted terminal value
    // of a fee-free, withdrawal-free account on the same shocks, whose
    // expectation is W0.
    double operator()(const double* z, double sign, double& control) const {
        const Rider& rider = *c_.rider;
        double w = w0_;
        double a = a0_;
        double total = 0.0;
        double log_free = 0.0;
        const std::size_t last = plan_.size() - 1;
        for (std::size_t k = 0; k <= last; ++k) {
            const EventPlan& e = plan_[k];
            const double shock = e.stdev * sign * z[k];
            w *= std::exp(e.mean + shock);
            log_free += e.free_mean + shock;
            if (e.death_weight != 0.0) {
                total += e.disc * e.death_weight * rider.death_benefit(e.ctx, StatePoint{w, a});
            }
            const StatePoint pre{apply_fee_deduction(c_.fee, e.ctx.dt, w, a), a};
            if (k == last) {
                total += e.disc * e.cash_weight * rider.maturity_payoff(e.ctx, pre);
                control = e.disc * w0_ * std::exp(log_free);
                break;
            }
            const double g = rider.contractual_amount(e.ctx, pre);
            const double gmax = rider.max_withdrawal(e.ctx, pre);
            const double gamma = static_withdrawal(c_.strategy.rule(e.ctx.n), pre.wealth, g, gmax);
            const JumpResult r = rider.jump(e.ctx, pre, gamma);
            total += e.disc * e.cash_weight * r.cashflow;
            w = r.post.wealth;
            a = r.post.base;
        }
        return total;
    }

private:
    const Contract& c_;
    double w0_;
    double a0_;
    std::vector<EventPlan> plan_;
};

struct BatchSums {
    double y = 0.0;
    double yy = 0.0;
    double x = 0.0;
    double xx = 0.0;
    double xy = 0.0;
    long samples = 0;
};

BatchSums run_batch(const PathPricer& pricer, std::uint64_t seed, long paths, bool antithetic) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::vector<double> z(pricer.events());
    BatchSums s;
    const long draws = antithetic ? (paths + 1) / 2 : paths;
    for (long p = 0; p < draws; ++p) {
        for (auto& v : z) v = normal(gen);
        double x = 0.0;
        double y = pricer(z.data(), 1.0, x);
        if (antithetic) {
            double x2 = 0.0;
            y = 0.5 * (y + pricer(z.data(), -1.0, x2));
            x = 0.5 * (x + x2);
        }
        s.y += y;
        s.yy += y * y;
        s.x += x;
        s.xx += x * x;
        s.xy += x * y;
        ++s.samples;
    }
    return s;
}

}  // namespace

PricingResult mc_price(const Contract& contract, const McConfig& config, double w0, double a0) {
    config.validate();
    contract.validate();
    if (!contract.strategy.is_static()) {
        throw UnsupportedError("mc: only static withdrawal strategies can be simulated forward");
    }
    const auto start = std::chrono::steady_clock::now();
    const PathPricer pricer(contract, w0, a0);

    const long batches = (config.paths + config.batch_size - 1) / config.batch_size;
    std::vector<BatchSums> results(static_cast<std::size_t>(batches));
    auto work = [&](long first, long stride) {
        for (long b = first; b < batches; b += stride) {
            const long paths = std::min(config.batch_size, config.paths - b * config.batch_size);
            results[static_cast<std::size_t>(b)] =
                run_batch(pricer, batch_seed(config.seed, static_cast<std::uint64_t>(b)), paths,
                          config.antithetic);
        }
    };
    const int threads = static_cast<int>(std::min<long>(config.threads, batches));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    BatchSums t;
    for (const auto& r : results) {
        t.y += r.y;
        t.yy += r.yy;
        t.x += r.x;
        t.xx += r.xx;
        t.xy += r.xy;
        t.samples += r.samples;
    }
    const double n = static_cast<double>(t.samples);
    const double my = t.y / n;
    const double mx = t.x / n;
    double var = std::max(t.yy / n - my * my, 0.0);
    double value = my;
    if (config.control_variate) {
        const double vx = t.xx / n - mx * mx;
        if (vx > 0.0) {
            const double beta = (t.xy / n - mx * my) / vx;
            value = my - beta * (mx - w0);
            var = std::max(var - beta * beta * vx, 0.0);
        }
    }

    PricingResult out;
    out.value = value;
    out.std_error = t.samples > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    out.method = "mc";
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

PricingResult mc_price(const Contract& contract, const McConfig& config) {
    return mc_price(contract, config, contract.premium, contract.premium);
}

}  // namespace gmxb
