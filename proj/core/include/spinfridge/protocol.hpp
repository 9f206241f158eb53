#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinfridge/evolution.hpp"
#include "spinfridge/swap.hpp"
#include "spinfridge/temperature.hpp"

namespace spinfridge {

enum class WaitingPolicy { Optimized, Fixed };

/// Which probe state the waiting-time search looks at when the run is
/// imperfect. IdealShadow follows an ideal (Gamma = 0, perfect swap) copy of
/// the run fed with the same waiting times; CurrentState searches on the
/// actual probe (still with the ideal generator).
enum class OptimizationTarget { IdealShadow, CurrentState };

struct ProtocolConfig {
  int probe_size = 10;
  /// Chain coupling J; |J| is the time unit for tau.
  double coupling = 1.0;
  double gamma = 0.0;
  double bath_beta = 0.2;
  /// Initial per-site inverse temperatures; empty means all zero temperature.
  std::vector<double> probe_betas;
  SwapSpec swap;
  int steps = 40;
  WaitingPolicy policy = WaitingPolicy::Optimized;
  /// J tau for the fixed policy.
  double fixed_tau = 1.0;
  /// Search range [0, tau_max] in J tau; negative means N.
  double tau_max = -1.0;
  IntegratorConfig integrator;
  OptimizationTarget optimize_on = OptimizationTarget::IdealShadow;
  /// Replaces the uniform chain (register must be 1..N).
  std::optional<SpinNetwork> network;
  /// Replaces the product initial state (register must be 1..N).
  std::optional<QuantumState> initial_probe;
  /// Require every probe site to start no hotter than the bath.
  bool enforce_cooler_probe = true;
  double coherence_tol = kCoherenceTol;
  /// Keep the probe state after every step in the report.
  bool record_probe_states = false;

  void validate() const;
  double time_unit() const;
  double search_range() const;
  SpinNetwork probe_network() const;
  QuantumState initial_state() const;
};

struct WaitingTime {
  /// J tau of the chosen grid point.
  double tau = 0.0;
  int grid_index = 0;
  double ground_population = 0.0;
  TemperatureRecord predicted;
};

struct StepRecord {
  int k = 0;
  double tau = 0.0;
  /// Emitted qubit temperature; empty when its populations are inverted
  /// (only reachable with enforce_cooler_probe off).
  std::optional<TemperatureRecord> qubit_out;
  /// ln(p1/p0) of the emitted qubit, signed.
  double beta_out = 0.0;
  std::array<double, 2> qubit_populations{0.0, 0.0};
  double eta = 0.0;
  double qubit_entropy = 0.0;
  /// S_T - S(qubit_out).
  double delta_S_qubit = 0.0;
  double probe_entropy = 0.0;
  double distance_to_pseudothermal = 0.0;
};

struct ProtocolReport {
  ProtocolConfig config;
  double bath_entropy = 0.0;
  double initial_probe_entropy = 0.0;
  double initial_distance = 0.0;
  std::vector<StepRecord> steps;
  /// Cumulative sum of delta_S_qubit.
  std::vector<double> delta_S_total;
  QuantumState final_probe;
  /// Probe before step 1 and after each step (record_probe_states only).
  std::vector<QuantumState> probe_states;
};

struct StepOutcome {
  QuantumState probe;
  QuantumState qubit_out;
};

/// Smallest grid time maximizing the ground population of site 1 under the
/// closed part of `gen`. Grid: J tau = k * spacing, k = 0..round(tau_max / spacing).
WaitingTime optimize_waiting_time(const QuantumState& probe, const LindbladGenerator& gen, double time_unit,
                                  double tau_max, const IntegratorConfig& cfg = {});

/// Wait for tau (J tau units) under `gen`, attach chi(bath_beta) at site 0,
/// swap it with site 1, and split the result.
StepOutcome cool_step(const QuantumState& probe, double bath_beta, const LindbladGenerator& gen, const SwapSpec& swap,
                      const SpinNetwork& probe_network, double tau, double time_unit,
                      const IntegratorConfig& cfg = {});

/// Holds the generators of one configuration; thread-safe to share.
class CoolingEngine {
 public:
  explicit CoolingEngine(ProtocolConfig cfg);

  const ProtocolConfig& config() const noexcept { return cfg_; }
  const LindbladGenerator& generator() const noexcept { return gen_; }
  const QuantumState& pseudo_thermal() const noexcept { return pseudo_thermal_; }
  bool is_ideal() const noexcept;

  WaitingTime optimize(const QuantumState& probe) const;
  StepOutcome step(const QuantumState& probe, double tau) const;
  StepOutcome ideal_step(const QuantumState& probe, double tau) const;
  StepRecord record(int k, double tau, const StepOutcome& out) const;

  ProtocolReport run() const;

 private:
  StepOutcome apply(const QuantumState& probe, double tau, const LindbladGenerator& gen, const SwapSpec& swap,
                    const std::optional<LindbladGenerator>& swap_gen) const;

  ProtocolConfig cfg_;
  SpinNetwork net_;
  LindbladGenerator gen_;
  LindbladGenerator ideal_;
  std::optional<LindbladGenerator> swap_gen_;
  QuantumState pseudo_thermal_;
  double bath_entropy_;
};

ProtocolReport run_protocol(const ProtocolConfig& cfg);

struct EntropyAuditRow {
  int k = 0;
  double delta_S_probe = 0.0;
  double delta_S_qubit = 0.0;
  double delta_S_qubit_total = 0.0;
  /// S(rho_P^(k)) - S(rho_P^(0)).
  double probe_gain = 0.0;
  bool ok = true;
};

struct EntropyAudit {
  bool pass = true;
  int first_violation = -1;
  std::string message;
  double bound = 0.0;
  std::vector<EntropyAuditRow> rows;
};

/// Checks dS_P >= dS_Q >= -tol at every step and
/// dS_Q_total <= S(rho_P^(k)) - S(rho_P^(0)) <= N S_T (each within tol).
EntropyAudit entropy_accounting(const ProtocolReport& report, double tol = 1e-9);

}  // namespace spinfridge
