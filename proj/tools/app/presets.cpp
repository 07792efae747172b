#include "app/presets.hpp"

#include <array>
#include <map>

#include "app/config.hpp"

namespace gmxb::app {

using nlohmann::json;

namespace {

constexpr std::array<double, 7> kRates = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07};

json contract_base(const char* account, bool optimal) {
    json doc = {
        {"rider", {{"type", "gmab"}, {"account", account}, {"withdrawal_limit", 0.15}, {"ratchet", true}}},
        {"market", {{"maturity", 10.0}, {"events_per_year", 4}, {"ratchet_every", 4}}},
        {"fee", {{"kind", "continuous"}}},
    };
    if (optimal) {
        // 21 candidates resolve the optimum to within a few hundredths of a
        // basis point here; the library default of 101 is five times slower.
        doc["strategy"] = {{"kind", "optimal"}, {"candidates", 21}};
    } else {
        doc["strategy"] = {{"kind", "static"}, {"rule", "none"}};
    }
    return doc;
}

json market_cell(double rate, double vol) { return {{"market", {{"rate", rate}, {"vol", vol}}}}; }

BenchTable make_table1() {
    BenchTable t{1, "GMAB super account, annual ratchet, no withdrawals", contract_base("super", false), {}};
    const std::array<double, 7> g10 = {337.2, 186.0, 116.8, 77.94, 53.91, 38.54, 28.11};
    const std::array<double, 7> g20 = {998.7, 637.1, 458.0, 346.9, 271.1, 216.3, 175.1};
    const std::array<double, 7> m10 = {338.2, 186.8, 117.3, 78.31, 54.32, 38.77, 28.30};
    const std::array<double, 7> m20 = {999.8, 637.7, 458.5, 347.5, 271.6, 216.7, 175.3};
    for (int s = 0; s < 2; ++s) {
        const double vol = s == 0 ? 0.10 : 0.20;
        for (std::size_t i = 0; i < kRates.size(); ++i) {
            BenchCell c{"no_withdrawal", kRates[i], vol, market_cell(kRates[i], vol), {}};
            c.reference.ghqc = s == 0 ? g10[i] : g20[i];
            c.reference.mc = s == 0 ? m10[i] : m20[i];
            t.cells.push_back(std::move(c));
        }
    }
    return t;
}

BenchTable make_table2() {
    BenchTable t{2, "GMAB pension account, static quarterly withdrawals, annual ratchet",
                 contract_base("pension", false), {}};
    const std::array<double, 7> g15 = {1084, 669.1, 464.1, 339.0, 255.0, 195.7, 152.1};
    const std::array<double, 7> m15 = {1085, 669.5, 464.4, 339.2, 255.2, 195.7, 152.2};
    const std::array<double, 7> g16 = {185.3, 152.9, 126.6, 105.1, 87.54, 73.21, 61.40};
    const std::array<double, 7> m16 = {185.3, 152.9, 126.6, 105.1, 87.51, 73.14, 61.36};
    for (int p = 0; p < 2; ++p) {
        const double fraction = p == 0 ? 0.0375 : 0.04;
        for (std::size_t i = 0; i < kRates.size(); ++i) {
            json o = market_cell(kRates[i], 0.20);
            o["strategy"] = {{"rule", "wealth_fraction"}, {"value", fraction}};
            BenchCell c{p == 0 ? "withdraw_15pct" : "withdraw_16pct", kRates[i], 0.20, o, {}};
            c.reference.ghqc = p == 0 ? g15[i] : g16[i];
            c.reference.mc = p == 0 ? m15[i] : m16[i];
            t.cells.push_back(std::move(c));
        }
    }
    return t;
}

BenchTable make_table3() {
    BenchTable t{3, "GMAB super account, optimal quarterly withdrawals, annual ratchet",
                 contract_base("super", true), {}};
    const std::array<double, 7> g10 = {370.7, 191.2, 118.1, 78.52, 54.47, 39.00, 28.38};
    const std::array<double, 7> g20 = {1235, 700.1, 478.8, 355.5, 275.2, 218.8, 176.9};
    for (int s = 0; s < 2; ++s) {
        const double vol = s == 0 ? 0.10 : 0.20;
        for (std::size_t i = 0; i < kRates.size(); ++i) {
            BenchCell c{"optimal", kRates[i], vol, market_cell(kRates[i], vol), {}};
            c.reference.ghqc = s == 0 ? g10[i] : g20[i];
            t.cells.push_back(std::move(c));
        }
    }
    return t;
}

BenchTable make_table4() {
    BenchTable t{4, "GMAB pension account, optimal quarterly withdrawals, annual ratchet",
                 contract_base("pension", true), {}};
    // The finite-difference error is O(h²) in ln W, so its grid is twice as fine.
    t.base["solver"] = {{"pde", {{"m", 800}}}};
    const std::array<double, 7> g10 = {472.6, 227.7, 135.4, 88.15, 60.24, 42.58, 30.63};
    const std::array<double, 7> g20 = {1474, 836.1, 552.8, 399.1, 304.3, 239.6, 192.5};
    const std::array<double, 7> d20 = {1479, 836.3, 553.6, 399.7, 304.7, 239.9, 192.8};
    const std::array<double, 7> f20 = {1466, 833.7, 551.7, 398.6, 304.0, 239.4, 192.4};
    for (int s = 0; s < 2; ++s) {
        const double vol = s == 0 ? 0.10 : 0.20;
        for (std::size_t i = 0; i < kRates.size(); ++i) {
            BenchCell c{"optimal", kRates[i], vol, market_cell(kRates[i], vol), {}};
            c.reference.ghqc = s == 0 ? g10[i] : g20[i];
            if (s == 1) {
                c.reference.fd = f20[i];
                c.reference.discrete = d20[i];
            }
            t.cells.push_back(std::move(c));
        }
    }
    return t;
}

}  // namespace

const BenchTable& bench_table(int id) {
    static const std::map<int, BenchTable> tables = {
        {1, make_table1()}, {2, make_table2()}, {3, make_table3()}, {4, make_table4()}};
    const auto it = tables.find(id);
    if (it == tables.end()) {
        throw ConfigError("table", "unknown benchmark table " + std::to_string(id) + " (expected 1 to 4)");
    }
    return it->second;
}

json cell_document(const BenchTable& table, const BenchCell& cell) {
    json doc = table.base;
    doc.merge_patch(cell.overrides);
    return doc;
}

}  // namespace gmxb::app
