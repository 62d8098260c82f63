#pragma once

#include <stdexcept>
#include <string>

namespace carlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested mode count or matrix dimension exceeds the configured capacity.
struct SizeError : Error {
  using Error::Error;
};

// Vector/matrix shapes do not match the mode system they are used with.
struct ShapeError : Error {
  using Error::Error;
};

// A basis or linear system is too ill-conditioned to proceed.
struct ConditioningError : Error {
  using Error::Error;
};

// An iterative solver failed to reach its tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

// Input lies outside the mathematical domain of the operation.
struct DomainError : Error {
  using Error::Error;
};

// An internally assembled object violates its own contract.
struct AssemblyError : Error {
  using Error::Error;
};

// Bad experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace carlab
