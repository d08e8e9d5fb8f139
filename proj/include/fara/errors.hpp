#pragma once

#include <stdexcept>
#include <string>

namespace fara {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: file syntax, unknown keys, invariant violations,
// oversized action spaces. The CLI maps these to exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

// An action index or tuple outside its action set.
class InvalidActionError : public Error {
public:
    using Error::Error;
};

// A probability vector that is not a valid point of the simplex.
class InvalidStrategyError : public Error {
public:
    using Error::Error;
};

// A gradient estimate with non-finite entries or the wrong length.
class InvalidGradientError : public Error {
public:
    using Error::Error;
};

// Multiplicative-weights normalizer collapsed to zero.
class UnderflowError : public Error {
public:
    using Error::Error;
};

}  // namespace fara
