#pragma once

#include <functional>
#include <span>

#include "spinfridge/linalg.hpp"

namespace spinfridge {

enum class Propagator {
  Rkf45,
  /// Exact eigendecomposition propagator; closed, time-independent evolution only.
  Spectral,
  /// Spectral when the generator is closed, RKF45 otherwise.
  Auto,
};

/// Step sizes are in units of 1/rate, where rate is the largest coupling of
/// the generator (J dt for a uniform chain).
struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double initial_step = 1e-3;
  double max_step = 0.1;
  /// Grid spacing (J tau) of dense output for waiting-time search.
  double dense_output_spacing = 0.01;
  /// Underflow threshold, relative to the time unit.
  double min_step = 1e-13;
  long max_steps = 50'000'000;
  Propagator propagator = Propagator::Auto;

  void validate() const;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

using BlockRhs = std::function<void(const BlockMatrices& y, BlockMatrices& dydt)>;
/// Called with the state at each requested sample time (exactly hit).
using BlockObserver = std::function<void(double t, const BlockMatrices& y)>;

/// Adaptive Runge-Kutta-Fehlberg 4(5) with the classic Fehlberg tableau,
/// propagating the fifth-order solution. Integrates y from 0 to t_end in
/// place. Sample times must be ascending and within [0, t_end]. Throws
/// IntegrationError on step-size underflow or when max_steps is exceeded.
IntegrationStats rkf45(const BlockRhs& rhs, BlockMatrices& y, double t_end, double rate, const IntegratorConfig& cfg,
                       std::span<const double> sample_times = {}, const BlockObserver& observer = {});

}  // namespace spinfridge
