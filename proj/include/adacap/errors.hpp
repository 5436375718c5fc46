#pragma once

#include <stdexcept>
#include <string>

namespace adacap {

// Error taxonomy shared across modules. Each maps to a CLI exit class:
// config errors -> 1, data errors -> 2, numerical aborts -> 3.

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical abort during training; carries the iteration that produced it.
struct DiagnosticError : std::runtime_error {
    int iteration;
    explicit DiagnosticError(const std::string& msg, int iter = -1)
        : std::runtime_error(msg), iteration(iter) {}
};

}  // namespace adacap
