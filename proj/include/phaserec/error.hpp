#pragma once

#include <stdexcept>
#include <string>

namespace phaserec {

/// Base of every error thrown by the library. Carries the name of the module
/// that raised it so reports can be tagged.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

  /// True for failures of a numerical procedure (as opposed to bad input).
  virtual bool numerical() const noexcept { return false; }

 private:
  std::string module_;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or malformed input (configs, parameters, shell mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A point lies where the measurement geometry forbids it.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Degenerate wave-vector pair or sampling offsets.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(std::string module, const std::string& what, double condition)
      : Error(std::move(module), what), condition_(condition) {}

  bool numerical() const noexcept override { return true; }
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
  bool numerical() const noexcept override { return true; }
};

}  // namespace phaserec
