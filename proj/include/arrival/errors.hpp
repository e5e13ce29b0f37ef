#pragma once

#include <stdexcept>
#include <string>

namespace arrival {

// Invalid arguments or violated preconditions.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failures: overflow, step-size collapse, unresolved grids.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace arrival
