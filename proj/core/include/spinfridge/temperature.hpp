#pragma once

#include <limits>

#include "spinfridge/quantum_state.hpp"

namespace spinfridge {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();
inline constexpr double kCoherenceTol = 1e-9;
/// p1 may fall below p0 by this much (round-off at infinite temperature).
inline constexpr double kInversionTol = 1e-12;

/// Dimensionless inverse temperature beta = omega / (k_B T) of a qubit with
/// H_Q = (omega/2) sigma^z. beta = 0 is infinite temperature, beta = +inf is
/// the ground state |1>.
struct TemperatureRecord {
  double beta_tilde = 0.0;
  /// p1 / p0 = exp(beta_tilde); +inf at zero temperature.
  double population_ratio = 1.0;

  static TemperatureRecord from_beta(double beta_tilde);
  bool is_zero_temperature() const noexcept { return beta_tilde == kInfiniteBeta; }
  /// k_B T / omega (0 at zero temperature, +inf at beta = 0).
  double kt_over_omega() const noexcept { return 1.0 / beta_tilde; }
};

/// Ground-state population p1 of chi(beta).
double ground_population(double beta_tilde);

/// Gibbs state diag(p0, p1) of one qubit, stored sector-blocked.
QuantumState thermal_qubit(double beta_tilde, int label = 1);

/// chi(beta)^{\otimes n} on sites first..first+n-1.
QuantumState thermal_product(double beta_tilde, int n, int first = 1);

/// Temperature of a single-qubit state. Throws StateError when the state has
/// coherence above `coherence_tol` ("not sigma^z-diagonal") or p1 < p0
/// ("population inversion").
TemperatureRecord temperature_of(const QuantumState& qubit, double coherence_tol = kCoherenceTol);

/// Temperature of a single site of a larger register.
TemperatureRecord site_temperature(const QuantumState& state, int label, double coherence_tol = kCoherenceTol);

/// Binary (Gibbs) entropy of chi(beta) in nats.
double thermal_entropy(double beta_tilde);

/// Cooling efficiency (T - T_out)/T = 1 - beta_bath/beta_out.
double cooling_efficiency(double beta_bath, double beta_out);

}  // namespace spinfridge
