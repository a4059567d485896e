#pragma once

#include <stdexcept>
#include <string>

namespace practsig {

/// Invalid argument to a density, sampler, or weighting function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed user input: data files, draws files, mismatched matrices.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown scenario, bad mixture weights, bad sweep.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The sampler could not find a starting point with finite log density.
class InitializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The target returned NaN (or +inf) at a finite point.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace practsig
