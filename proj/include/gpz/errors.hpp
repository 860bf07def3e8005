#pragma once

#include <stdexcept>
#include <string>

namespace gpz {

// Invalid user input: malformed config, bad measure JSON, violated preconditions
// that a caller could have checked. CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to meet its contract (tolerance unreachable,
// embedding rejected, quadrature breakdown). CLI maps this to exit code 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a structural question (atoms, local regularity) cannot be decided
// from the representation. Never guessed silently.
struct unknown_structure_error : std::runtime_error {
    explicit unknown_structure_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gpz
