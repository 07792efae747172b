#pragma once

#include <cstdint>

#include "gmxb/solver/contract.hpp"

namespace gmxb {

struct McConfig {
    long paths = 20'000'000;  // counts antithetic partners separately
    std::uint64_t seed = 20120601;
    bool antithetic = true;
    // Regression control on the discounted fee-free terminal wealth.
    bool control_variate = true;
    long batch_size = 50'000;
    int threads = 1;

    void validate() const;
};

/// Forward simulation of a contract under a static withdrawal strategy.
///
/// Mortality enters through survival weights rather than simulated deaths.
/// Each batch draws from its own generator seeded from (seed, batch index),
/// and batch results are combined in index order, so the estimate does not
/// depend on the thread count.
///
/// Throws UnsupportedError for optimal or threshold strategies.
PricingResult mc_price(const Contract& contract, const McConfig& config, double w0, double a0);
PricingResult mc_price(const Contract& contract, const McConfig& config);

// Stream seed for one batch; a splitmix64 mix of the run seed and the index.
std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch);

}  // namespace gmxb
