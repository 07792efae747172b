#include "app/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "app/config.hpp"
#include "app/presets.hpp"
#include "gmxb/analysis/analysis.hpp"

#ifndef GMXB_VERSION
#define GMXB_VERSION "0.0.0"
#endif

namespace gmxb::app {

using nlohmann::json;

std::string version() { return GMXB_VERSION; }

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

json assemble(const Invocation& inv, json doc) {
    if (!doc.is_object()) doc = json::object();
    if (inv.config_path) doc.merge_patch(load_config_file(*inv.config_path));
    for (const auto& o : inv.overrides) apply_override(doc, o);
    if (inv.seed) doc["solver"]["mc"]["seed"] = *inv.seed;
    if (inv.threads) doc["solver"]["threads"] = *inv.threads;
    if (inv.out) doc["output"]["csv"] = *inv.out;
    return doc;
}

std::string fee_kind_name(FeeKind k) {
    switch (k) {
        case FeeKind::continuous: return "continuous";
        case FeeKind::discrete_on_wealth: return "on_wealth";
        case FeeKind::discrete_on_base: return "on_base";
    }
    return "continuous";
}

std::string solver_summary(const SolverSettings& s) {
    std::ostringstream o;
    o << "method=" << to_string(s.method) << " lattice=" << s.ghqc.lattice.m << "x" << s.ghqc.lattice.j
      << " q=" << s.ghqc.quadrature_order << " integration="
      << (s.ghqc.integration == Integration::exact_spline ? "exact_spline" : "gauss_hermite")
      << " pde_lattice=" << s.pde.lattice.m << "x" << s.pde.lattice.j
      << " pde_steps=" << s.pde.scheme.steps_per_interval << " mc_paths=" << s.mc.paths
      << " mc_seed=" << s.mc.seed;
    return o.str();
}

// Buffers the CSV so that a failure part-way leaves no truncated file.
class CsvReport {
public:
    CsvReport(const std::string& command, const std::string& hash, const std::string& solver) {
        body_ << "# gmxb " << version() << " (nlohmann_json " << NLOHMANN_JSON_VERSION_MAJOR << "."
              << NLOHMANN_JSON_VERSION_MINOR << "." << NLOHMANN_JSON_VERSION_PATCH << ")\n"
              << "# command: " << command << "\n"
              << "# config_hash: " << hash << "\n"
              << "# solver: " << solver << "\n";
    }
    void comment(const std::string& line) { body_ << "# " << line << "\n"; }
    void row(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) body_ << ',';
            body_ << c;
            first = false;
        }
        body_ << '\n';
    }
    void emit(const std::string& path, std::ostream& fallback) const {
        if (path.empty()) {
            fallback << body_.str();
            fallback.flush();
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("output.csv", "cannot write '" + path + "'");
        f << body_.str();
        if (!f) throw ConfigError("output.csv", "write to '" + path + "' failed");
    }

private:
    std::ostringstream body_;
};

FairFeeResult solve_fee(const RunConfig& run, Method method, std::optional<double> guess) {
    FairFeeRequest req = run.fee_request();
    req.solver.method = method;
    if (guess && !req.guess) req.guess = guess;
    return fair_fee(run.contract, req);
}

std::string opt_bp(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : std::string();
}

std::string rel(double computed, const std::optional<double>& reference) {
    return reference ? fixed(computed / *reference - 1.0, 6) : std::string();
}

// Runs `task(i)` for i in [0, n) on up to `threads` workers. Results are
// written by index, so the order of completion never shows in the output;
// the first failure by index is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ------------------------------------------------------------------ price

int cmd_price(const Invocation& inv, std::ostream& out, std::ostream& log) {
    const RunConfig run = build_run(assemble(inv, json::object()));
    const PricingResult r = price(run.contract, run.solver, run.wealth, run.base);
    if (!std::isfinite(r.value)) throw NumericalError("price: non-finite value");
    CsvReport csv("price", config_hash(run.document), solver_summary(run.solver));
    csv.row({"method", "wealth", "base", "fee_kind", "fee_bp", "value", "std_error", "guarantee_value"});
    csv.row({r.method, sci(run.wealth), sci(run.base), fee_kind_name(run.contract.fee.kind),
             fixed(run.contract.fee.rate * 1e4, run.output.precision), fixed(r.value, 10),
             fixed(r.std_error, 10), fixed(r.value - run.wealth, 10)});
    csv.emit(run.output.csv, out);
    log << "price " << fixed(r.value, 8) << " (" << r.method << ", " << fixed(r.seconds, 2) << " s)\n";
    return exit_ok;
}

// --------------------------------------------------------------- fairfee

int cmd_fairfee(const Invocation& inv, std::ostream& out, std::ostream& log) {
    const RunConfig run = build_run(assemble(inv, json::object()));
    const FairFeeResult f = solve_fee(run, run.solver.method, std::nullopt);
    const int p = run.output.precision;
    CsvReport csv("fairfee", config_hash(run.document), solver_summary(run.solver));
    csv.row({"method", "fee_kind", "fee_bp", "continuous_equivalent_bp", "std_error_bp", "evaluations",
             "residual"});
    csv.row({to_string(run.solver.method), fee_kind_name(run.contract.fee.kind), fixed(f.rate * 1e4, p),
             fixed(f.continuous_equivalent * 1e4, p), fixed(f.std_error * 1e4, p),
             std::to_string(f.evaluations), sci(f.residual)});
    csv.emit(run.output.csv, out);
    log << "fair fee " << fixed(f.rate * 1e4, 3) << " bp after " << f.evaluations << " prices ("
        << fixed(f.seconds, 2) << " s)\n";
    return exit_ok;
}

// ----------------------------------------------------------------- bench

struct BenchRow {
    std::string column;
    double computed_bp = 0.0;
    std::optional<double> reference_bp;
    double std_error_bp = 0.0;
    double seconds = 0.0;
};

std::vector<BenchRow> bench_cell(const RunConfig& run, const ReferenceFees& reference) {
    std::vector<BenchRow> rows;
    const FairFeeResult g = solve_fee(run, Method::ghqc, std::nullopt);
    rows.push_back({"ghqc", g.rate * 1e4, reference.ghqc, 0.0, g.seconds});
    if (run.bench.mc && reference.mc && run.contract.strategy.is_static()) {
        const FairFeeResult m = solve_fee(run, Method::mc, g.rate);
        rows.push_back({"mc", m.rate * 1e4, reference.mc, m.std_error * 1e4, m.seconds});
    }
    if (run.bench.pde && reference.fd) {
        const FairFeeResult f = solve_fee(run, Method::pde, g.rate);
        rows.push_back({"fd", f.rate * 1e4, reference.fd, 0.0, f.seconds});
    }
    if (run.bench.discrete && reference.discrete) {
        RunConfig d = run;
        d.contract.fee = FeeStructure::on_wealth(0.0);
        const double dt = d.contract.market.dt(1);
        const FairFeeResult r = solve_fee(d, Method::ghqc, continuous_to_discrete_rate(g.rate, dt));
        // The reference discrete values are quoted as their continuous equivalents.
        rows.push_back({"discrete", r.continuous_equivalent * 1e4, reference.discrete, 0.0, r.seconds});
    }
    return rows;
}

int cmd_bench(const Invocation& inv, std::ostream& out, std::ostream& log) {
    if (!inv.table) throw ConfigError("table", "bench needs --table 1, 2, 3 or 4");
    const BenchTable& table = bench_table(*inv.table);

    std::vector<RunConfig> runs;
    json all = json::array();
    for (const auto& cell : table.cells) {
        runs.push_back(build_run(assemble(inv, cell_document(table, cell))));
        all.push_back(runs.back().document);
    }
    const int threads = runs.front().solver.mc.threads;
    if (threads > 1) {
        for (auto& r : runs) r.solver.mc.threads = 1;
    }

    std::vector<std::vector<BenchRow>> results(runs.size());
    std::mutex log_mutex;
    const auto start = std::chrono::steady_clock::now();
    parallel_for(runs.size(), threads, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        results[i] = bench_cell(runs[i], table.cells[i].reference);
        std::lock_guard<std::mutex> lock(log_mutex);
        log << "table " << table.id << " " << table.cells[i].panel << " r=" << fixed(table.cells[i].rate, 2)
            << " sigma=" << fixed(table.cells[i].vol, 2) << ":";
        for (const auto& row : results[i]) log << " " << row.column << "=" << fixed(row.computed_bp, 2);
        log << " (" << fixed(seconds_since(t0), 1) << " s)\n";
    });
    log << "table " << table.id << " done in " << fixed(seconds_since(start), 1) << " s\n";

    const int p = runs.front().output.precision;
    CsvReport csv("bench", config_hash(all), solver_summary(runs.front().solver));
    csv.comment("table " + std::to_string(table.id) + ": " + table.title);
    csv.row({"table", "panel", "r", "sigma", "column", "computed_bp", "reference_bp", "rel_diff", "std_error_bp"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const BenchCell& cell = table.cells[i];
        for (const auto& row : results[i]) {
            csv.row({std::to_string(table.id), cell.panel, fixed(cell.rate, 2), fixed(cell.vol, 2), row.column,
                     fixed(row.computed_bp, p), opt_bp(row.reference_bp, 2), rel(row.computed_bp, row.reference_bp),
                     fixed(row.std_error_bp, p)});
        }
    }
    csv.emit(runs.front().output.csv, out);
    return exit_ok;
}

// -------------------------------------------------------------- validate

struct ValidateCell {
    std::string panel;
    double rate = 0.0;
    double vol = 0.0;
    RunConfig run;
    double ghqc_bp = 0.0;
    double other_bp = 0.0;
    double other_se_bp = 0.0;
};

Method validation_method(const RunConfig& run) {
    const std::string& a = run.validate.against;
    const bool is_static = run.contract.strategy.is_static();
    if (a == "mc" && !is_static) {
        throw UnsupportedError(
            "validate: Monte Carlo simulates forward and cannot follow an optimal or threshold "
            "withdrawal strategy, which is only known backward in time; use validate.against=pde");
    }
    if (a == "mc" || (a == "auto" && is_static)) return Method::mc;
    return Method::pde;
}

int cmd_validate(const Invocation& inv, std::ostream& out, std::ostream& log) {
    std::vector<ValidateCell> cells;
    json all = json::array();
    if (inv.table) {
        const BenchTable& table = bench_table(*inv.table);
        for (const auto& cell : table.cells) {
            cells.push_back({cell.panel, cell.rate, cell.vol, build_run(assemble(inv, cell_document(table, cell)))});
        }
    } else {
        RunConfig run = build_run(assemble(inv, json::object()));
        const double r = run.contract.market.rate(1);
        const double v = run.contract.market.vol(1);
        cells.push_back({"config", r, v, std::move(run)});
    }
    for (const auto& c : cells) all.push_back(c.run.document);
    const RunConfig& first = cells.front().run;
    const Method other = validation_method(first);
    for (const auto& c : cells) validation_method(c.run);
    const double threshold =
        first.validate.threshold > 0.0 ? first.validate.threshold : (other == Method::mc ? 0.01 : 0.005);
    // Monte Carlo noise is per cell, so every cell must pass; the grid-based
    // comparison is judged on the average as in the reference cross-check.
    const bool use_mean = other == Method::pde;

    const int threads = first.solver.mc.threads;
    if (threads > 1) {
        for (auto& c : cells) c.run.solver.mc.threads = 1;
    }
    std::mutex log_mutex;
    parallel_for(cells.size(), threads, [&](std::size_t i) {
        ValidateCell& c = cells[i];
        const auto t0 = std::chrono::steady_clock::now();
        const FairFeeResult g = solve_fee(c.run, Method::ghqc, std::nullopt);
        const FairFeeResult o = solve_fee(c.run, other, g.rate);
        c.ghqc_bp = g.rate * 1e4;
        c.other_bp = o.rate * 1e4;
        c.other_se_bp = o.std_error * 1e4;
        std::lock_guard<std::mutex> lock(log_mutex);
        log << "validate " << c.panel << " r=" << fixed(c.rate, 2) << " sigma=" << fixed(c.vol, 2)
            << ": ghqc=" << fixed(c.ghqc_bp, 2) << " " << to_string(other) << "=" << fixed(c.other_bp, 2)
            << " (" << fixed(seconds_since(t0), 1) << " s)\n";
    });

    // Both solvers finding a zero fee counts as agreement.
    auto rel_diff = [](const ValidateCell& c) {
        if (c.ghqc_bp == 0.0) return c.other_bp == 0.0 ? 0.0 : INFINITY;
        return c.other_bp / c.ghqc_bp - 1.0;
    };
    double max_abs = 0.0;
    double sum_abs = 0.0;
    for (const auto& c : cells) {
        const double d = std::abs(rel_diff(c));
        max_abs = std::max(max_abs, d);
        sum_abs += d;
    }
    const double mean_abs = sum_abs / static_cast<double>(cells.size());
    const bool pass = (use_mean ? mean_abs : max_abs) < threshold;

    const int p = first.output.precision;
    CsvReport csv("validate", config_hash(all), solver_summary(first.solver));
    if (inv.table) csv.comment("table " + std::to_string(*inv.table));
    csv.row({"kind", "panel", "r", "sigma", "ghqc_bp", "method", "other_bp", "other_se_bp", "rel_diff",
             "threshold", "pass"});
    for (const auto& c : cells) {
        csv.row({"cell", c.panel, fixed(c.rate, 4), fixed(c.vol, 4), fixed(c.ghqc_bp, p), to_string(other),
                 fixed(c.other_bp, p), fixed(c.other_se_bp, p), fixed(rel_diff(c), 6), "", ""});
    }
    const std::string thr = fixed(threshold, 6);
    csv.row({"max_abs", "", "", "", "", to_string(other), "", "", fixed(max_abs, 6), use_mean ? "" : thr,
             use_mean ? "" : (pass ? "true" : "false")});
    csv.row({"mean_abs", "", "", "", "", to_string(other), "", "", fixed(mean_abs, 6), use_mean ? thr : "",
             use_mean ? (pass ? "true" : "false") : ""});
    csv.emit(first.output.csv, out);
    log << "validate: " << (use_mean ? "mean" : "max") << " |rel diff| "
        << fixed((use_mean ? mean_abs : max_abs) * 100.0, 4) << "% vs threshold " << fixed(threshold * 100.0, 4)
        << "%: " << (pass ? "pass" : "FAIL") << "\n";
    return pass ? exit_ok : exit_validation;
}

// ---------------------------------------------------------------- greeks

int cmd_greeks(const Invocation& inv, std::ostream& out, std::ostream& log) {
    const RunConfig run = build_run(assemble(inv, json::object()));
    const auto t0 = std::chrono::steady_clock::now();
    const GhqcConfig& cfg = run.solver.ghqc;
    const Lattice lattice = Lattice::build(cfg.lattice, run.contract.market, run.contract.premium);
    const Solution sol = ghqc_solve(run.contract, lattice, gauss_hermite(cfg.quadrature_order),
                                    ValueMode::conditional, cfg.integration, cfg.split_kinks);
    const Greeks lik = delta_gamma_likelihood(sol, run.wealth, run.base);
    const Greeks bump = greeks_bump(run.contract, cfg, run.wealth, run.base, run.greeks.bumps);
    const double s = run.greeks.asset_price;

    CsvReport csv("greeks", config_hash(run.document), solver_summary(run.solver));
    csv.row({"method", "value", "delta", "gamma", "rho", "vega", "guarantee_value", "guarantee_delta",
             "hedge_units"});
    auto num = [](double v) { return fixed(v, 8); };
    csv.row({"likelihood", num(lik.value), num(lik.delta), num(lik.gamma), "", "", num(lik.value - run.wealth),
             num(lik.guarantee_delta()), num(hedge_units(lik.delta, run.wealth, s))});
    csv.row({"bump", num(bump.value), num(bump.delta), num(bump.gamma), num(bump.rho), num(bump.vega),
             num(bump.value - run.wealth), num(bump.guarantee_delta()), num(hedge_units(bump.delta, run.wealth, s))});
    csv.emit(run.output.csv, out);
    log << "greeks done (" << fixed(seconds_since(t0), 2) << " s)\n";
    return exit_ok;
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& log) {
    if (inv.command == "price") return cmd_price(inv, out, log);
    if (inv.command == "fairfee") return cmd_fairfee(inv, out, log);
    if (inv.command == "bench") return cmd_bench(inv, out, log);
    if (inv.command == "validate") return cmd_validate(inv, out, log);
    if (inv.command == "greeks") return cmd_greeks(inv, out, log);
    throw ConfigError("", "unknown command '" + inv.command + "'");
}

int exit_code_for_current_exception(std::ostream& log) {
    try {
        throw;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const UnsupportedError& e) {
        log << "unsupported: " << e.what() << "\n";
        return exit_config;
    } catch (const ContractError& e) {
        log << "contract error: " << e.what() << "\n";
        return exit_config;
    } catch (const DataError& e) {
        log << "data error: " << e.what() << "\n";
        return exit_config;
    } catch (const ParameterError& e) {
        log << "invalid parameter: " << e.what() << "\n";
        return exit_config;
    } catch (const BracketError& e) {
        log << "fair fee search failed: " << e.what() << "\n";
        return exit_numerical;
    } catch (const SingularityError& e) {
        log << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

}  // namespace gmxb::app
