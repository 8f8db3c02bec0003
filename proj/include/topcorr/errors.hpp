#pragma once

#include <stdexcept>
#include <string>

namespace topcorr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (bad angle, mass below threshold, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// A state or matrix does not satisfy the invariants of a physical two-qubit state.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A projective outcome has vanishing probability, so the conditional state is undefined.
class DegenerateMeasurementError : public Error
{
public:
  using Error::Error;
};

/// Not enough events to form an estimate.
class InsufficientStatisticsError : public Error
{
public:
  using Error::Error;
};

/// Malformed input data (tables, event files).
class InputDataError : public Error
{
public:
  using Error::Error;
};

/// Bad run configuration (CLI flags, config files).
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// A numerical self-consistency check failed; indicates a bug or a precision problem.
class InternalError : public Error
{
public:
  using Error::Error;
};

} // namespace topcorr
