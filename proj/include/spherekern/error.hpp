#pragma once

#include <stdexcept>
#include <string>

namespace spherekern {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (|t| > 1, d < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration Z whose smallest singular value is below the rank threshold.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Point on a locus where a map is undefined, e.g. x in the range of Z.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Quadrature rule too short for the requested exactness.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// A sampled invariance precondition did not hold.
class InvarianceError : public Error {
 public:
  using Error::Error;
};

/// A sampled positive-definiteness precondition did not hold.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// Infeasible or unbounded linear program, or a certificate that could not be repaired.
class LPError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_domain(const std::string& what);

}  // namespace spherekern
