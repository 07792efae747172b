#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/presets.hpp"
#include "gmxb/riders/riders.hpp"

namespace gmxb::app {
namespace {

using nlohmann::json;

std::string error_path(const json& doc) {
    try {
        build_run(doc);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<none>";
}

TEST(Config, DefaultsDescribeTheBenchmarkContract) {
    const RunConfig run = build_run(json::object());
    EXPECT_EQ(run.contract.rider->name(), "gmab");
    EXPECT_EQ(run.contract.market.events(), 40u);
    EXPECT_TRUE(run.contract.market.is_ratchet(4));
    EXPECT_FALSE(run.contract.market.is_ratchet(5));
    EXPECT_EQ(run.solver.method, Method::ghqc);
    EXPECT_EQ(run.solver.ghqc.lattice.m, 400);
    EXPECT_EQ(run.solver.ghqc.lattice.j, 200);
    EXPECT_EQ(run.solver.mc.paths, 20'000'000);
    EXPECT_NEAR(run.search.upper, 0.2, 1e-15);
    EXPECT_NEAR(run.search.tolerance, 1e-6, 1e-18);
    EXPECT_EQ(run.document, default_document());
}

TEST(Config, UnknownKeysReportTheirPath) {
    EXPECT_EQ(error_path({{"rider", {{"acount", "super"}}}}), "rider.acount");
    EXPECT_EQ(error_path({{"solver", {{"lattice", {{"mm", 3}}}}}}), "solver.lattice.mm");
    EXPECT_EQ(error_path({{"extra", 1}}), "extra");
    // Keys of another rider type are unknown for this one.
    EXPECT_EQ(error_path({{"rider", {{"type", "gmab"}, {"variant", "spec1"}}}}), "rider.variant");
}

TEST(Config, TypeAndRangeErrors) {
    EXPECT_EQ(error_path({{"market", {{"rate", "high"}}}}), "market.rate");
    EXPECT_EQ(error_path({{"market", {{"vol", -0.1}}}}), "market.vol");
    EXPECT_EQ(error_path({{"solver", {{"lattice", {{"m", 2.5}}}}}}), "solver.lattice.m");
    EXPECT_EQ(error_path({{"strategy", {{"kind", "clever"}}}}), "strategy.kind");
    EXPECT_EQ(error_path({{"market", {{"maturity", 10.1}}}}), "market.maturity");
    EXPECT_EQ(error_path({{"market", {{"rate", json::array({0.01, 0.02})}}}}), "market.rate");
    EXPECT_EQ(error_path({{"fee", 3}}), "fee");
    EXPECT_EQ(error_path({{"search", {{"lower_bp", 500}, {"upper_bp", 100}}}}), "search.upper_bp");
    EXPECT_EQ(error_path({{"mortality", {{"life_table", "/nonexistent.csv"}}}}), "mortality.life_table");
}

TEST(Config, PerPeriodMarketParameters) {
    std::vector<double> rates(40, 0.03);
    rates[0] = 0.01;
    const RunConfig run = build_run({{"market", {{"rate", rates}}}});
    EXPECT_DOUBLE_EQ(run.contract.market.rate(1), 0.01);
    EXPECT_DOUBLE_EQ(run.contract.market.rate(2), 0.03);
}

TEST(Config, RiderTypes) {
    for (const char* t : {"gmab", "gmwb", "glwb", "gmib", "gmdb", "none"}) {
        const RunConfig run = build_run({{"rider", {{"type", t}}}});
        EXPECT_EQ(run.contract.rider->name(), t);
    }
}

TEST(Overrides, DottedKeysAndValueParsing) {
    json doc = json::object();
    apply_override(doc, "market.rate=0.03");
    apply_override(doc, "rider.account=pension");
    apply_override(doc, "rider.ratchet=false");
    apply_override(doc, "solver.lattice.m=800");
    EXPECT_DOUBLE_EQ(doc["market"]["rate"].get<double>(), 0.03);
    EXPECT_EQ(doc["rider"]["account"], "pension");
    EXPECT_EQ(doc["rider"]["ratchet"], false);
    EXPECT_EQ(doc["solver"]["lattice"]["m"], 800);
    EXPECT_THROW(apply_override(doc, "market.rate"), ConfigError);
    EXPECT_THROW(apply_override(doc, "market.rate.x=1"), ConfigError);
    EXPECT_THROW(apply_override(doc, "market..rate=1"), ConfigError);
}

TEST(Config, HashIsStableAndSensitive) {
    const json a = build_run(json::object()).document;
    const json b = build_run({{"market", {{"rate", 0.05}}}}).document;
    const json c = build_run({{"market", {{"rate", 0.04}}}}).document;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(c));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, MalformedText) {
    EXPECT_THROW(parse_config_text("{\"a\": }"), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent/config.json"), ConfigError);
    EXPECT_NO_THROW(parse_config_text("// comment\n{\"market\": {\"rate\": 0.02}}"));
}

TEST(Presets, EveryTableBuilds) {
    const int sizes[] = {14, 14, 14, 14};
    for (int id = 1; id <= 4; ++id) {
        const BenchTable& t = bench_table(id);
        EXPECT_EQ(static_cast<int>(t.cells.size()), sizes[id - 1]);
        for (const auto& cell : t.cells) {
            const RunConfig run = build_run(cell_document(t, cell));
            EXPECT_DOUBLE_EQ(run.contract.market.rate(1), cell.rate);
            EXPECT_DOUBLE_EQ(run.contract.market.vol(1), cell.vol);
            EXPECT_TRUE(cell.reference.ghqc.has_value());
        }
    }
    EXPECT_THROW(bench_table(5), ConfigError);
    EXPECT_EQ(build_run(cell_document(bench_table(3), bench_table(3).cells[0])).contract.strategy.candidates, 21);
}

int run_cli(const Invocation& inv, std::string& out, std::string& log) {
    std::ostringstream o, l;
    int code = 0;
    try {
        code = run(inv, o, l);
    } catch (...) {
        code = exit_code_for_current_exception(l);
    }
    out = o.str();
    log = l.str();
    return code;
}

TEST(Commands, PriceOfNoGuaranteeIsPremium) {
    Invocation inv;
    inv.command = "price";
    inv.overrides = {"rider.type=none", "solver.lattice.j=5"};
    std::string out, log;
    ASSERT_EQ(run_cli(inv, out, log), exit_ok) << log;
    EXPECT_NE(out.find("# config_hash: "), std::string::npos);
    const auto row = out.find("ghqc,1,1,continuous,0.0,");
    ASSERT_NE(row, std::string::npos) << out;
    EXPECT_NEAR(std::stod(out.substr(row + 24)), 1.0, 1e-6) << out;
}

TEST(Commands, ReRunsAreByteIdentical) {
    Invocation inv;
    inv.command = "price";
    inv.overrides = {"solver.method=mc", "solver.mc.paths=20000", "fee.rate_bp=271.1"};
    inv.seed = 99;
    std::string a, b, log;
    ASSERT_EQ(run_cli(inv, a, log), exit_ok) << log;
    ASSERT_EQ(run_cli(inv, b, log), exit_ok) << log;
    EXPECT_EQ(a, b);
    inv.seed = 100;
    ASSERT_EQ(run_cli(inv, b, log), exit_ok);
    EXPECT_NE(a, b);
}

TEST(Commands, ExitCodes) {
    Invocation inv;
    inv.command = "price";
    inv.overrides = {"rider.colour=red"};
    std::string out, log;
    EXPECT_EQ(run_cli(inv, out, log), exit_config);
    EXPECT_NE(log.find("rider.colour"), std::string::npos);
    EXPECT_TRUE(out.empty());

    inv.command = "validate";
    inv.overrides = {"strategy.kind=optimal", "validate.against=mc"};
    EXPECT_EQ(run_cli(inv, out, log), exit_config);
    EXPECT_NE(log.find("Monte Carlo"), std::string::npos);

    // A contract worth less than the premium at zero fee has no fair fee.
    inv.command = "fairfee";
    inv.overrides = {"rider.type=none", "market.rate=-0.02", "search.lower_bp=100", "solver.lattice.j=5"};
    EXPECT_EQ(run_cli(inv, out, log), exit_numerical);

    inv.command = "bench";
    inv.overrides = {};
    EXPECT_EQ(run_cli(inv, out, log), exit_config);
}

TEST(Commands, ValidateAgainstFiniteDifferences) {
    Invocation inv;
    inv.command = "validate";
    inv.overrides = {"market.vol=0.15", "rider.ratchet=false", "solver.lattice.j=5", "validate.against=pde"};
    std::string out, log;
    EXPECT_EQ(run_cli(inv, out, log), exit_ok) << log << out;
    EXPECT_NE(out.find("mean_abs,,,,,pde"), std::string::npos) << out;
    EXPECT_NE(out.find(",true"), std::string::npos) << out;
}

TEST(Commands, ValidationFailureExitCode) {
    Invocation inv;
    inv.command = "validate";
    // A deliberately coarse Monte Carlo run cannot meet a 1e-6 threshold.
    inv.overrides = {"fee.rate_bp=271", "solver.mc.paths=2000", "validate.threshold=1e-6"};
    std::string out, log;
    EXPECT_EQ(run_cli(inv, out, log), exit_validation) << log;
    EXPECT_NE(out.find("max_abs"), std::string::npos);
}

TEST(Commands, WritesCsvFile) {
    const std::string path = ::testing::TempDir() + "gmxb_greeks.csv";
    Invocation inv;
    inv.command = "greeks";
    inv.overrides = {"fee.rate_bp=271.6", "solver.lattice.j=40"};
    inv.out = path;
    std::string out, log;
    ASSERT_EQ(run_cli(inv, out, log), exit_ok) << log;
    EXPECT_TRUE(out.empty());
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    EXPECT_NE(s.str().find("likelihood,"), std::string::npos);
    EXPECT_NE(s.str().find("bump,"), std::string::npos);
    std::remove(path.c_str());
}

}  // namespace
}  // namespace gmxb::app
