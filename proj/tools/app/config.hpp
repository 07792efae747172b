#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "gmxb/analysis/analysis.hpp"
#include "gmxb/errors.hpp"

namespace gmxb::app {

// Schema violation, carrying the dotted path of the offending field.
class ConfigError : public ParameterError {
public:
    ConfigError(const std::string& path, const std::string& message)
        : ParameterError(path.empty() ? message : path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct OutputSpec {
    std::string csv;     // empty: standard output
    int precision = 1;   // decimals for fees in bp
};

struct GreeksSpec {
    BumpSizes bumps;
    double asset_price = 1.0;  // S in the hedge-unit formula
};

struct ValidateSpec {
    std::string against = "auto";  // auto, mc or pde
    double threshold = 0.0;        // relative fee difference; 0 picks the default per solver
};

// Extra columns of the benchmark sweeps.
struct BenchSpec {
    bool mc = false;       // Monte Carlo fair fees next to GHQC (static tables)
    bool pde = true;       // finite-difference column where the table has one
    bool discrete = true;  // discrete-fee column where the table has one
};

/// A fully parsed run: the contract, how to price it and what to report.
struct RunConfig {
    Contract contract;
    SolverSettings solver;
    FairFeeRequest search;  // its `solver` member is filled from `solver` on use
    double wealth = 1.0;    // state priced by `price` and `greeks`
    double base = 1.0;
    OutputSpec output;
    GreeksSpec greeks;
    ValidateSpec validate;
    BenchSpec bench;
    nlohmann::json document;  // configuration after defaults, used for the provenance hash

    FairFeeRequest fee_request() const {
        FairFeeRequest r = search;
        r.solver = solver;
        return r;
    }
};

// Reads a JSON document; throws ConfigError on I/O or syntax errors.
nlohmann::json load_config_file(const std::string& path);
nlohmann::json parse_config_text(const std::string& text);

/// Applies "a.b.c=value" to the document. The value is read as JSON when it
/// parses as such and as a string otherwise; intermediate objects are created.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates the document against the schema and builds the run.
/// Unknown keys, wrong types and out-of-range values throw ConfigError.
RunConfig build_run(const nlohmann::json& doc);

// Full document with every default filled in, for documentation and hashing.
nlohmann::json default_document();

// 64-bit FNV-1a hash of the canonical (sorted, compact) JSON text, in hex.
std::string config_hash(const nlohmann::json& doc);

}  // namespace gmxb::app
