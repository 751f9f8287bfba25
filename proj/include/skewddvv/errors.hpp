#pragma once

#include <stdexcept>
#include <string>

namespace skewddvv {

// Operation is defined only for larger matrix dimensions (e.g. n = 2 where a
// statement needs n >= 3).
struct unsupported_dimension : std::invalid_argument {
    explicit unsupported_dimension(const std::string& what)
        : std::invalid_argument(what) {}
};

// Input lies outside the configuration space an operation supports.
struct unsupported_input : std::invalid_argument {
    explicit unsupported_input(const std::string& what)
        : std::invalid_argument(what) {}
};

// An iterative kernel failed to converge, or a guaranteed numeric
// postcondition was violated.
struct numeric_failure : std::runtime_error {
    explicit numeric_failure(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace skewddvv
