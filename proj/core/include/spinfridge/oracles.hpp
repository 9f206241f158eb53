#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinfridge/protocol.hpp"

namespace spinfridge {

/// Enough information to replay a failing trial.
struct Witness {
  std::string description;
  int trial = -1;
  std::uint64_t trial_seed = 0;
  std::vector<std::pair<std::string, double>> values;
};

struct OracleVerdict {
  std::string name;
  bool pass = true;
  int trials = 0;
  /// Smallest margin seen (e.g. beta_out - beta_bath); negative on failure.
  double worst_margin = 0.0;
  /// Oracle-specific flag (majorization: strict dominance observed;
  /// stationary: perturbed states displaced).
  bool secondary = false;
  std::optional<Witness> witness;
  double seconds = 0.0;
};

/// Random XXZ network on sites 1..n: every pair coupled with J uniform in
/// [-j, j] and Delta uniform in [0, 2].
SpinNetwork random_xxz_network(int n, double j, std::mt19937_64& rng);

struct AlwaysCoolsOptions {
  int max_sites = 4;
  int trials = 500;
  int steps_per_trial = 3;
  std::uint64_t seed = 20240601;
  double gamma_max = 1.0;
  double interaction_min = 0.5;
  double interaction_max = 100.0;
  /// Fraction of trials using a partial swap; the rest swap perfectly.
  double partial_fraction = 1.0;
  /// Set one randomly chosen probe site to half the bath inverse temperature.
  bool inject_hot_site = false;
  /// Verify each sampled channel is unital and excitation conserving first.
  bool check_channels = true;
  int threads = 1;
  IntegratorConfig integrator;
};
OracleVerdict oracle_always_cools(const AlwaysCoolsOptions& opt = {});

struct StationaryOptions {
  int max_sites = 5;
  int tau_samples = 10;
  std::vector<double> gammas{0.0, 0.3};
  double bath_beta = 0.2;
  double anisotropy = 1.0;
  double interaction_strength = 5.0;
  std::uint64_t seed = 7;
  double tol = 1e-8;
  /// Required displacement of a perturbed product state after one step.
  double displacement = 1e-6;
  double perturbed_factor = 2.0;
  int threads = 1;
  IntegratorConfig integrator;
};
OracleVerdict oracle_stationary_state(const StationaryOptions& opt = {});

/// Entropy chain on each report, plus monotone probe entropy bounded by N S_T
/// for reports started from a pure probe.
OracleVerdict oracle_entropy_bounds(std::span<const ProtocolReport> reports, double tol = 1e-9);

struct MajorizationOptions {
  int max_sites = 4;
  int trials = 200;
  std::uint64_t seed = 99;
  double gamma_min = 0.0;
  double gamma_max = 1.0;
  double tau_max = 3.0;
  /// Replace the channel with a reset of site 1 to |1> (non-unital).
  bool reset_channel = false;
  double tol = 1e-10;
  int threads = 1;
  IntegratorConfig integrator;
};
OracleVerdict oracle_majorization(const MajorizationOptions& opt = {});

/// Partial sums of sorted-descending `a` dominate those of `b` (within tol)
/// and the totals agree. Sets `strict` when some partial sum exceeds by > tol.
bool majorizes(const RealVector& a, const RealVector& b, double tol, bool* strict = nullptr);

}  // namespace spinfridge
