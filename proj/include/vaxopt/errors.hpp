#pragma once

#include <stdexcept>
#include <string>

namespace vaxopt {

/// Invalid or inconsistent configuration input. Mapped to CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (singular population, negativity abort, NaN).
/// Mapped to CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vaxopt
