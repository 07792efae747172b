#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gmxb::app {

// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
    exit_validation = 4,
};

// Command-line options shared by every subcommand.
struct Invocation {
    std::string command;  // price, fairfee, bench, validate or greeks
    std::optional<std::string> config_path;
    std::optional<int> table;
    std::vector<std::string> overrides;  // key=value, applied in order
    std::optional<std::string> out;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

/// Runs one subcommand. CSV goes to the configured file, or to `out` when
/// none is set; progress and runtimes go to `log`.
///
/// Returns exit_ok or exit_validation. Configuration problems and numerical
/// failures propagate as exceptions for `exit_code_for_current_exception`.
int run(const Invocation& inv, std::ostream& out, std::ostream& log);

// Maps the exception currently being handled to an exit code and writes the
// message to `log`. Call only from inside a catch block.
int exit_code_for_current_exception(std::ostream& log);

std::string version();

}  // namespace gmxb::app
