#pragma once

#include <stdexcept>
#include <string>

namespace wishmom {

/// A parameter or matrix is outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Cholesky pivot test failed: the matrix is not positive definite.
class NotPositiveDefinite : public DomainError {
 public:
  explicit NotPositiveDefinite(const std::string& what) : DomainError(what) {}
};

/// A block that must be inverted is numerically singular.
class SingularBlock : public DomainError {
 public:
  explicit SingularBlock(const std::string& what) : DomainError(what) {}
};

/// Iterative eigensolver hit its sweep cap before reaching tolerance.
class ConvergenceFailure : public std::runtime_error {
 public:
  explicit ConvergenceFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// A truncated series reached its degree cap with a non-negligible tail.
class NotConverged : public std::runtime_error {
 public:
  explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
};

/// A Monte Carlo weight overflowed even after max-shifting.
class NonFinite : public std::runtime_error {
 public:
  explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wishmom
