#pragma once

#include <optional>

#include "spinfridge/evolution.hpp"
#include "spinfridge/spin_network.hpp"

namespace spinfridge {

enum class SwapMode { Perfect, Partial };

/// How the thermal qubit (site 0) is exchanged with probe site 1.
///
/// A partial swap switches on J_I sigma_0 . sigma_1 for pi / (4 J_I) with a
/// rectangular window, while the probe Hamiltonian (optional) and the qubit
/// gap (omega/2) sigma^z_0 stay on.
struct SwapSpec {
  SwapMode mode = SwapMode::Perfect;
  double interaction_strength = 0.0;
  bool background = true;
  /// Qubit splitting omega in units of J; H_Q = (omega/2) sigma^z acts during the window.
  double qubit_gap = 1.0;
  /// Dephasing rate during the window; unset means "same as the probe".
  std::optional<double> gamma;
  bool dephase_qubit = false;

  static SwapSpec perfect() { return {}; }
  static SwapSpec partial(double interaction_strength);

  double duration() const;
  void validate() const;
};

/// Conjugation by the two-site SWAP unitary.
QuantumState perfect_swap(const QuantumState& state, int site_i, int site_j);

/// Generator of the swap window on the joint register {0} + probe register.
LindbladGenerator partial_swap_generator(const SwapSpec& spec, const SpinNetwork& probe, double probe_gamma);

/// Evolve qubit (site 0) + probe under the swap window.
QuantumState partial_swap(const QuantumState& joint, const SwapSpec& spec, const SpinNetwork& probe,
                          double probe_gamma = 0.0, const IntegratorConfig& cfg = {});

}  // namespace spinfridge
