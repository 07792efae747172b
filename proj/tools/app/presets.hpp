#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gmxb::app {

// Reference fair fee of one benchmark cell, in bp; absent columns are empty.
struct ReferenceFees {
    std::optional<double> ghqc;
    std::optional<double> mc;
    std::optional<double> fd;
    std::optional<double> discrete;  // discrete fee converted to its continuous equivalent
};

struct BenchCell {
    std::string panel;
    double rate = 0.0;
    double vol = 0.0;
    nlohmann::json overrides;  // merged over the table's base configuration
    ReferenceFees reference;
};

struct BenchTable {
    int id = 0;
    std::string title;
    nlohmann::json base;
    std::vector<BenchCell> cells;
};

// Tables 1 to 4; throws ConfigError for any other id.
const BenchTable& bench_table(int id);

// Base configuration of a table with the overrides of one of its cells applied.
nlohmann::json cell_document(const BenchTable& table, const BenchCell& cell);

}  // namespace gmxb::app
