#pragma once

#include <stdexcept>
#include <string>

namespace ploc {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration value violates its constraints (rates, thresholds, sweeps).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A function argument is outside its domain.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Significance normalization was asked for a histogram with no features.
class EmptyHistogramError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Jitter model used outside 0 <= Tj <= T2.
class ModelValidityError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// A caller broke a precondition on data shape or ordering (unsorted trains,
/// premature normalization).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Unreadable or malformed input file.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace ploc
