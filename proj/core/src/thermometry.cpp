#include "spinfridge/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

TemperatureEstimate from_counts(double n0, double n1) {
  TemperatureEstimate e;
  if (n0 <= 0.0) {
    e.boundary = true;
    e.beta_tilde = kInfiniteBeta;
    e.stderr_beta = kInfiniteBeta;
    return e;
  }
  e.inversion = n1 < n0;
  if (n1 <= 0.0) {
    e.beta_tilde = -kInfiniteBeta;
    e.stderr_beta = kInfiniteBeta;
    return e;
  }
  e.beta_tilde = std::log(n1 / n0);
  e.stderr_beta = std::sqrt(1.0 / n0 + 1.0 / n1);
  return e;
}

}  // namespace

TemperatureRecord TemperatureEstimate::record() const {
  if (inversion) throw StateError("inversion in sample");
  if (boundary) return {kInfiniteBeta, kInfiniteBeta};
  return {beta_tilde, std::exp(beta_tilde)};
}

TemperatureEstimate estimate_temperature(const QuantumState& probe, std::uint64_t shots_per_site,
                                         std::uint64_t seed) {
  if (shots_per_site < 1) throw DomainError("shots_per_site must be >= 1");
  std::mt19937_64 rng(seed);
  std::uint64_t n1 = 0;
  for (int label : probe.reg().labels()) {
    const double p1 = std::clamp(site_populations(probe, label)[1], 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(shots_per_site, p1);
    n1 += draw(rng);
  }
  const std::uint64_t total = shots_per_site * static_cast<std::uint64_t>(probe.num_sites());
  TemperatureEstimate e = from_counts(static_cast<double>(total - n1), static_cast<double>(n1));
  e.n0 = total - n1;
  e.n1 = n1;
  return e;
}

TemperatureEstimate exact_temperature_estimate(const QuantumState& probe) {
  double p0 = 0.0;
  double p1 = 0.0;
  for (int label : probe.reg().labels()) {
    const auto pops = site_populations(probe, label);
    p0 += std::max(pops[0], 0.0);
    p1 += std::max(pops[1], 0.0);
  }
  TemperatureEstimate e = from_counts(p0, p1);
  // no sampling noise in the infinite-shot limit
  e.stderr_beta = 0.0;
  return e;
}

}  // namespace spinfridge
