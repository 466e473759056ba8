#pragma once

#include <stdexcept>
#include <string>

namespace recon {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A vector dimension is invalid or two operands disagree on dimension.
struct DimensionError : Error {
  using Error::Error;
};

/// An argument lies outside the mathematical domain of a formula.
struct DomainError : Error {
  using Error::Error;
};

/// A linear system (or the frame operator) is numerically singular.
struct RankDeficiencyError : Error {
  using Error::Error;
};

/// The slab system admits an unbounded ray.
struct UnboundedPolytopeError : Error {
  using Error::Error;
};

/// Problem size exceeds a configured enumeration cap.
struct CapacityError : Error {
  using Error::Error;
};

/// A guaranteed internal invariant failed.
struct InternalError : Error {
  using Error::Error;
};

/// Invalid run configuration (sweep parameters, CLI flags).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace recon
