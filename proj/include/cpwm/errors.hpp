#pragma once

#include <stdexcept>
#include <string>

namespace cpwm {

// bad input: maps to CLI exit code 2
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// propagation blew up, step underflow, turning point hit: exit code 1
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cpwm
