#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's contract.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computation could not produce a valid result (disconnected graph,
/// singular system, eigensolver failure, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fraclap
