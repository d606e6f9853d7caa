#pragma once

#include <stdexcept>
#include <string>

namespace dgmv {

enum class Errc {
  // input / validation
  NotSymmetric,
  NotPositiveDefinite,
  BadDimension,
  NonzeroDrift,
  ZeroBookValue,
  NegativeUnderlying,
  BadOptionParams,
  AsymmetricCustomGamma,
  DimensionMismatch,
  ConfigError,
  // solver / numeric
  EigenFailure,
  SingularH,
  Infeasible,
  SingularKKT,
  NotPD,
  ZeroValues,
  SingularNormalEquations,
  OutOfDomain,
  CustomNotRepriceable,
  ExpiryCrossed,
  // environment
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Bad user input: rejected before any numerics run. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A solve or analytic evaluation failed on validated input. CLI exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / stream failure. CLI exit code 4.
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(Errc::IoError, message) {}
};

/// MGF evaluated outside its domain; remembers which eigenvalue was binding.
class MgfDomainError : public SolverError {
 public:
  MgfDomainError(const std::string& message, int binding_index)
      : SolverError(Errc::OutOfDomain, message), binding_index_(binding_index) {}

  int binding_index() const noexcept { return binding_index_; }

 private:
  int binding_index_;
};

}  // namespace dgmv
