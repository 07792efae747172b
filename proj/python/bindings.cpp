#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "app/config.hpp"
#include "app/presets.hpp"
#include "gmxb/analysis/analysis.hpp"
#include "gmxb/errors.hpp"
#include "gmxb/numerics/quadrature.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using namespace gmxb;

// The Python layer passes configurations as JSON text plus "a.b=value" overrides.
app::RunConfig load(const std::string& config, const std::vector<std::string>& overrides) {
    json doc = config.empty() ? json::object() : app::parse_config_text(config);
    for (const auto& o : overrides) app::apply_override(doc, o);
    return app::build_run(doc);
}

py::dict price_run(const std::string& config, const std::vector<std::string>& overrides) {
    const app::RunConfig run = load(config, overrides);
    PricingResult r;
    {
        py::gil_scoped_release release;
        r = price(run.contract, run.solver, run.wealth, run.base);
    }
    py::dict out;
    out["method"] = r.method;
    out["wealth"] = run.wealth;
    out["base"] = run.base;
    out["fee_rate"] = run.contract.fee.rate;
    out["value"] = r.value;
    out["std_error"] = r.std_error;
    out["guarantee_value"] = r.value - run.wealth;
    out["seconds"] = r.seconds;
    out["config_hash"] = app::config_hash(run.document);
    return out;
}

py::dict fair_fee_run(const std::string& config, const std::vector<std::string>& overrides,
                      std::optional<double> guess) {
    const app::RunConfig run = load(config, overrides);
    FairFeeRequest req = run.fee_request();
    if (guess) req.guess = guess;
    FairFeeResult r;
    {
        py::gil_scoped_release release;
        r = fair_fee(run.contract, req);
    }
    py::dict out;
    out["method"] = to_string(run.solver.method);
    out["rate"] = r.rate;
    out["rate_bp"] = r.rate * 1e4;
    out["continuous_equivalent"] = r.continuous_equivalent;
    out["std_error"] = r.std_error;
    out["residual"] = r.residual;
    out["evaluations"] = r.evaluations;
    out["seconds"] = r.seconds;
    out["config_hash"] = app::config_hash(run.document);
    return out;
}

py::dict greeks_dict(const Greeks& g, double wealth, double asset_price) {
    py::dict d;
    d["value"] = g.value;
    d["delta"] = g.delta;
    d["gamma"] = g.gamma;
    d["rho"] = g.rho;
    d["vega"] = g.vega;
    d["guarantee_value"] = g.value - wealth;
    d["guarantee_delta"] = g.guarantee_delta();
    d["hedge_units"] = hedge_units(g.delta, wealth, asset_price);
    return d;
}

py::dict greeks_run(const std::string& config, const std::vector<std::string>& overrides) {
    const app::RunConfig run = load(config, overrides);
    const GhqcConfig& cfg = run.solver.ghqc;
    Greeks lik, bump;
    {
        py::gil_scoped_release release;
        const Lattice lattice = Lattice::build(cfg.lattice, run.contract.market, run.contract.premium);
        const Solution sol = ghqc_solve(run.contract, lattice, gauss_hermite(cfg.quadrature_order),
                                        ValueMode::conditional, cfg.integration, cfg.split_kinks);
        lik = delta_gamma_likelihood(sol, run.wealth, run.base);
        bump = greeks_bump(run.contract, cfg, run.wealth, run.base, run.greeks.bumps);
    }
    py::dict out;
    out["likelihood"] = greeks_dict(lik, run.wealth, run.greeks.asset_price);
    out["bump"] = greeks_dict(bump, run.wealth, run.greeks.asset_price);
    return out;
}

py::list bench_cells(int table) {
    const app::BenchTable& t = app::bench_table(table);
    py::list cells;
    for (const auto& c : t.cells) {
        py::dict reference;
        reference["ghqc"] = c.reference.ghqc;
        reference["mc"] = c.reference.mc;
        reference["fd"] = c.reference.fd;
        reference["discrete"] = c.reference.discrete;
        py::dict d;
        d["panel"] = c.panel;
        d["rate"] = c.rate;
        d["vol"] = c.vol;
        d["config"] = app::cell_document(t, c).dump();
        d["reference_bp"] = reference;
        cells.append(d);
    }
    return cells;
}

std::string resolved_config(const std::string& config, const std::vector<std::string>& overrides) {
    return load(config, overrides).document.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pricing engine for variable annuity guarantees.";
    m.attr("__version__") = GMXB_VERSION;

    static py::exception<app::ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const app::ConfigError& e) {
            PyErr_SetString(config_error.ptr(), e.what());
        } catch (const UnsupportedError& e) {
            PyErr_SetString(PyExc_NotImplementedError, e.what());
        } catch (const ParameterError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ContractError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const DataError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const BracketError& e) {
            PyErr_SetString(numerical_error.ptr(), e.what());
        } catch (const SingularityError& e) {
            PyErr_SetString(numerical_error.ptr(), e.what());
        } catch (const NumericalError& e) {
            PyErr_SetString(numerical_error.ptr(), e.what());
        }
    });

    m.def("price", &price_run, py::arg("config"), py::arg("overrides"));
    m.def("fair_fee", &fair_fee_run, py::arg("config"), py::arg("overrides"), py::arg("guess") = py::none());
    m.def("greeks", &greeks_run, py::arg("config"), py::arg("overrides"));
    m.def("bench_cells", &bench_cells, py::arg("table"));
    m.def("resolved_config", &resolved_config, py::arg("config"), py::arg("overrides"));
    m.def("default_config", [] { return app::default_document().dump(); });
    m.def("gauss_hermite", [](int q) {
        const Quadrature r = gauss_hermite(q);
        return py::make_tuple(r.nodes, r.weights);
    }, py::arg("q"));
}
