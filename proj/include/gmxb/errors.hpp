#pragma once

#include <stdexcept>
#include <string>

namespace gmxb {

// Invalid argument to a numerical kernel or model constructor.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Root search was given a bracket without a sign change.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear system with a vanishing pivot.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Withdrawal outside the admissible set, or an ill-posed contract state.
class ContractError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Non-finite values produced inside a solver.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing or malformed input data (life tables, config files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested solver cannot handle the strategy (e.g. Monte Carlo with optimal withdrawals).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gmxb
