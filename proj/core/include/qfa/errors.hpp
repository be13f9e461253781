#pragma once

#include <stdexcept>
#include <string>

namespace qfa {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroInverse : Error {
  ZeroInverse() : Error("inverse of 0 mod p does not exist") {}
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& what) : Error("budget exceeded: " + what) {}
};

struct EmptySetError : Error {
  explicit EmptySetError(const std::string& what) : Error("empty set: " + what) {}
};

struct EmptyLevelSet : Error {
  EmptyLevelSet() : Error("level set is empty") {}
};

struct SupportViolation : Error {
  explicit SupportViolation(const std::string& what) : Error("support violation: " + what) {}
};

struct DimensionTooLarge : Error {
  explicit DimensionTooLarge(const std::string& what) : Error(what) {}
};

struct PreconditionUnmet : Error {
  explicit PreconditionUnmet(const std::string& what) : Error("precondition unmet: " + what) {}
};

struct DegenerateCoefficients : Error {
  explicit DegenerateCoefficients(const std::string& what) : Error(what) {}
};

struct CoefficientSumNonzero : Error {
  CoefficientSumNonzero() : Error("coefficients do not sum to zero mod p") {}
};

struct TooManyRows : Error {
  TooManyRows() : Error("system has more rows than tensor-cube columns") {}
};

struct UnknownSuite : Error {
  explicit UnknownSuite(const std::string& name) : Error("unknown suite: " + name) {}
};

struct BadParams : Error {
  explicit BadParams(const std::string& what) : Error("bad parameters: " + what) {}
};

struct IncrementNotFound : Error {
  explicit IncrementNotFound(const std::string& what) : Error("increment not found: " + what) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error("format error: " + what) {}
};

/// Thrown when an explicit-constant inequality that must always hold is
/// violated.  Reaching this indicates a genuine bug.
struct CheckFailed : Error {
  explicit CheckFailed(const std::string& what) : Error("check failed: " + what) {}
};

}  // namespace qfa
