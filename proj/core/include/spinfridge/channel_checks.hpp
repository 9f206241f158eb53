#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "spinfridge/quantum_state.hpp"

namespace spinfridge {

using Channel = std::function<QuantumState(const QuantumState&)>;

struct ChannelWitness {
  bool pass = true;
  /// Largest deviation seen (|delta <sum Z>| or max |E(1/d) - 1/d|).
  double deviation = 0.0;
  /// First state that violated the property.
  std::optional<QuantumState> counterexample;
  int trial = -1;
};

/// Random full-rank state rho = G G^dag / tr, G complex Ginibre. The blocked
/// variant draws each sector independently with random sector weights.
QuantumState random_state(const SpinRegister& reg, std::mt19937_64& rng,
                          Representation repr = Representation::Dense);

/// Checks sum_n tr[Z_n rho] = sum_n tr[Z_n E(rho)] on random dense states.
ChannelWitness conserves_z_excitation(const Channel& channel, const SpinRegister& reg, int trials,
                                      std::uint64_t seed = 1, double tol = 1e-9);

/// Checks E(1/d) = 1/d entrywise.
ChannelWitness is_unital(const Channel& channel, const SpinRegister& reg, double tol = 1e-9);

}  // namespace spinfridge
