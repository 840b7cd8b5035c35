#pragma once

#include <stdexcept>
#include <string>

namespace balayage {

/// Input outside the mathematical domain of an operation (t <= 0 in a kernel,
/// a pole on the boundary, an atom outside the grid, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operands of mismatched dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A premise checked numerically before evaluating a formula failed
/// (q != p outside S, omega not a balayage of delta_x, ...).
class HypothesisViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric fault that must never be silently turned into NaN: a +inf/-inf
/// clash, too many restarted random walks.
class NumericFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario configuration or fixture file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace balayage
