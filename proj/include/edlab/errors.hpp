#pragma once

#include <stdexcept>
#include <string>

namespace edlab {

/// Invalid user-facing configuration (chain length, preset, grid, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (bad index, size mismatch).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operator that was required to commute with the chain reflection does not.
class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed or produced a result outside tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// File-system or cache failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edlab
