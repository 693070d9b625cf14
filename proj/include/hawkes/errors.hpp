#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

// Branching ratio >= 1 where a stable kernel is required.
class InstabilityError : public std::domain_error {
public:
    explicit InstabilityError(const std::string& what) : std::domain_error(what) {}
};

// Two grid functions with different step or span were combined.
class GridMismatchError : public std::invalid_argument {
public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace hawkes
