#pragma once

#include <stdexcept>
#include <string>

namespace voronet {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A requested fractional moment E[W^e] does not exist (is infinite or undefined).
class MomentDivergesError : public Error {
public:
    using Error::Error;
};

/// An iterative computation exhausted its evaluation budget before reaching tolerance.
class NoConvergenceError : public Error {
public:
    using Error::Error;
};

/// Inputs violate a precondition of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The simulation window is too small to contain the typical cell reliably.
class WindowTooSmallError : public Error {
public:
    using Error::Error;
};

/// Too few moments supplied for the void-probability series at the requested tolerance.
class InsufficientMomentsError : public Error {
public:
    using Error::Error;
};

}  // namespace voronet
