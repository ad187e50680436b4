// errors.hpp — exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace bjj {

// Invalid physical configuration or malformed input file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver breakdown: non-convergence, step-size underflow, positivity loss.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bjj
