#pragma once

#include <stdexcept>
#include <string>

namespace spinfridge {

/// Precondition violated by the caller (bad site, negative temperature, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computed quantity left its admissible range (non-diagonal qubit,
/// population inversion, sector mixing, negative eigenvalue).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The adaptive integrator could not make progress.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time, double step, double error_norm)
      : std::runtime_error(what), time_(time), step_(step), error_norm_(error_norm) {}

  double time() const noexcept { return time_; }
  double step() const noexcept { return step_; }
  double error_norm() const noexcept { return error_norm_; }

 private:
  double time_;
  double step_;
  double error_norm_;
};

}  // namespace spinfridge
