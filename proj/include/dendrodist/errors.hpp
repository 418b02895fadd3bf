#pragma once

#include <stdexcept>
#include <string>

namespace dd {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Invariant violations: bad constructor arguments, malformed inputs.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input too large for a dense algorithm (names n and the configured limit).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Sample-count mismatch between two inputs that must be the same length.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Feature-dimension mismatch between two inputs.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Matrix failed the positive-semidefinite check.
class NotPsdError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid mode-layout request (e.g. grid mode count not a perfect square).
class LayoutError : public Error {
public:
    using Error::Error;
};

/// Not enough samples to satisfy a draw without replacement.
class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

} // namespace dd
