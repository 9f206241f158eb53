#include "spinfridge/temperature.hpp"

#include <cmath>
#include <sstream>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

void check_beta(double beta_tilde) {
  if (std::isnan(beta_tilde) || beta_tilde < 0.0) {
    std::ostringstream os;
    os << "inverse temperature must lie in [0, +inf], got " << beta_tilde;
    throw DomainError(os.str());
  }
}

}  // namespace

TemperatureRecord TemperatureRecord::from_beta(double beta_tilde) {
  check_beta(beta_tilde);
  return {beta_tilde, std::exp(beta_tilde)};
}

double ground_population(double beta_tilde) {
  check_beta(beta_tilde);
  if (beta_tilde == kInfiniteBeta) return 1.0;
  // p1 = e^{b/2} / (e^{-b/2} + e^{b/2}) = 1 / (1 + e^{-b})
  return 1.0 / (1.0 + std::exp(-beta_tilde));
}

QuantumState thermal_qubit(double beta_tilde, int label) {
  const double p1 = ground_population(beta_tilde);
  const double p0 = beta_tilde == kInfiniteBeta ? 0.0 : std::exp(-beta_tilde) * p1;
  BlockMatrices blocks(2, Matrix(1, 1));
  blocks[0](0, 0) = p0;
  blocks[1](0, 0) = p1;
  return QuantumState::blocked(SpinRegister({label}), std::move(blocks));
}

QuantumState thermal_product(double beta_tilde, int n, int first) {
  if (n < 1) throw DomainError("thermal_product needs at least one site");
  std::vector<QuantumState> factors;
  factors.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) factors.push_back(thermal_qubit(beta_tilde, first + i));
  return product_state(factors);
}

TemperatureRecord temperature_of(const QuantumState& qubit, double coherence_tol) {
  if (qubit.num_sites() != 1) throw DomainError("temperature_of expects a single-qubit state");
  if (std::abs(qubit.element(0, 1)) > coherence_tol) throw StateError("not sigma^z-diagonal");
  double p0 = qubit.element(0, 0).real();
  double p1 = qubit.element(1, 1).real();
  if (p0 < -kEigenvalueFloor || p1 < -kEigenvalueFloor) throw StateError("negative population");
  p0 = std::max(p0, 0.0);
  p1 = std::max(p1, 0.0);
  if (p1 < p0 - kInversionTol) throw StateError("population inversion");
  if (p0 <= 0.0) return {kInfiniteBeta, kInfiniteBeta};
  const double ratio = std::max(p1 / p0, 1.0);
  return {std::log(ratio), ratio};
}

TemperatureRecord site_temperature(const QuantumState& state, int label, double coherence_tol) {
  return temperature_of(partial_trace(state, {label}), coherence_tol);
}

double thermal_entropy(double beta_tilde) {
  const double p1 = ground_population(beta_tilde);
  const double p0 = 1.0 - p1;
  double s = 0.0;
  if (p0 > 0.0) s -= p0 * std::log(p0);
  if (p1 > 0.0) s -= p1 * std::log(p1);
  return s;
}

double cooling_efficiency(double beta_bath, double beta_out) {
  if (beta_out == kInfiniteBeta) return 1.0;
  if (beta_out <= 0.0) return beta_bath <= 0.0 ? 0.0 : -kInfiniteBeta;
  return 1.0 - beta_bath / beta_out;
}

}  // namespace spinfridge
