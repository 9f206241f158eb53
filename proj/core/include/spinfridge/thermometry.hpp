#pragma once

#include <cstdint>

#include "spinfridge/quantum_state.hpp"
#include "spinfridge/temperature.hpp"

namespace spinfridge {

struct TemperatureEstimate {
  /// ln(n1 / n0); +inf when n0 = 0, may be negative when flagged inverted.
  double beta_tilde = 0.0;
  double stderr_beta = 0.0;
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  /// n0 = 0: the estimate sits at the zero-temperature boundary.
  bool boundary = false;
  /// n1 < n0: the sample looks population-inverted.
  bool inversion = false;

  /// Estimate as a record; throws StateError when inverted.
  TemperatureRecord record() const;
};

/// Measures sigma^z `shots_per_site` times on every probe site (binomial
/// draws from the exact site populations, std::mt19937_64 seeded by `seed`),
/// pools the counts and returns the log-ratio estimator with its delta-method
/// standard error sqrt(1/n0 + 1/n1).
TemperatureEstimate estimate_temperature(const QuantumState& probe, std::uint64_t shots_per_site, std::uint64_t seed);

/// Infinite-shot limit: pooled exact populations.
TemperatureEstimate exact_temperature_estimate(const QuantumState& probe);

}  // namespace spinfridge
