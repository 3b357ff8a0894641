#pragma once

#include <stdexcept>
#include <string>

namespace becbell {

/// Malformed input structure: bad dimensions, invalid permutations,
/// schema violations. Maps to CLI exit code 1.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Physically inadmissible request: unstable model, non-physical
/// covariance matrix, degenerate measurement. Maps to CLI exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to reach its tolerance. Carries the
/// precision actually achieved. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

}  // namespace becbell
