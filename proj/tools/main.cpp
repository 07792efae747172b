#include <CLI/CLI.hpp>

#include <iostream>

#include "app/commands.hpp"

int main(int argc, char** argv) {
    using gmxb::app::Invocation;

    CLI::App app{"Pricing of variable-annuity guarantees"};
    app.set_version_flag("--version", gmxb::app::version());
    app.require_subcommand(1);

    Invocation inv;
    std::string config;
    int table = 0;
    std::string out;
    int threads = 0;
    std::uint64_t seed = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"price", "Value the contract at the configured state"},
        {"fairfee", "Solve for the fee at which the contract is worth its premium"},
        {"bench", "Reproduce a benchmark table of fair fees"},
        {"validate", "Cross-check GHQC fair fees against Monte Carlo or finite differences"},
        {"greeks", "Delta and Gamma by the likelihood method, all Greeks by bump and reprice"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--table", table, "Benchmark table preset")->check(CLI::Range(1, 4));
        sub->add_option("--set", inv.overrides, "Override a configuration field, e.g. market.rate=0.03")
            ->allow_extra_args(false);
        sub->add_option("--out", out, "CSV output path (default: standard output)");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Monte Carlo seed");
        sub->callback([&, sub] {
            inv.command = sub->get_name();
            if (sub->count("--config")) inv.config_path = config;
            if (sub->count("--table")) inv.table = table;
            if (sub->count("--out")) inv.out = out;
            if (sub->count("--threads")) inv.threads = threads;
            if (sub->count("--seed")) inv.seed = seed;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? gmxb::app::exit_ok : gmxb::app::exit_config;
    }

    try {
        return gmxb::app::run(inv, std::cout, std::cerr);
    } catch (...) {
        return gmxb::app::exit_code_for_current_exception(std::cerr);
    }
}
