#pragma once

#include <stdexcept>
#include <string>

namespace shishkin {

/// Invalid input ranges: eps <= 0, mu < 0, x outside [0,1], bad indices.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent configuration: N not divisible by 4, bad boundary split,
/// malformed config files or flags.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical invariant broke at run time (non-positive pivot, non-finite value).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace shishkin
