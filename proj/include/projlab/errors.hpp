#pragma once

#include <stdexcept>
#include <string>

namespace projlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input files, unparsable rational literals, schema violations.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

/// Domain violations: parameters outside an operation's admissible range,
/// rank-deficient bases, infeasible problem data.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// Singular matrix passed where a nonsingular one is required.
class SingularMatrixError : public DomainError {
 public:
  explicit SingularMatrixError(const std::string& what) : DomainError(what) {}
};

/// Internal solver failures: invariant violations, lost certificates.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

}  // namespace projlab
