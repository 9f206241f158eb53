#pragma once

#include <memory>
#include <vector>

#include "spinfridge/integrator.hpp"
#include "spinfridge/lindblad.hpp"
#include "spinfridge/quantum_state.hpp"

namespace spinfridge {

/// Exact closed-system propagator from the eigendecomposition of each block
/// of H on a layout.
class SpectralPropagator {
 public:
  SpectralPropagator(const Hamiltonian& h, std::shared_ptr<const BasisLayout> layout);

  const std::shared_ptr<const BasisLayout>& layout() const noexcept { return layout_; }
  const RealVector& energies(int block) const { return energies_[static_cast<std::size_t>(block)]; }
  const Matrix& eigenvectors(int block) const { return vectors_[static_cast<std::size_t>(block)]; }

  /// e^{-iHt} rho e^{iHt}, Hermitian-symmetrized.
  BlockMatrices propagate(const BlockMatrices& rho, double t) const;

  /// Population of |1> at basis bit `bit` at times k * dt, k = 0..count-1.
  std::vector<double> site_population_profile(const BlockMatrices& rho, int bit, double dt, int count) const;

 private:
  std::shared_ptr<const BasisLayout> layout_;
  std::vector<Matrix> vectors_;
  bool real_;
  /// Empty unless H is real.
  std::vector<RealMatrix> real_vectors_;
  std::vector<RealVector> energies_;
};

/// True when `cfg` selects the spectral propagator for `gen`. Throws
/// DomainError if Spectral is forced on an open generator.
bool uses_spectral(const LindbladGenerator& gen, const IntegratorConfig& cfg);

/// Layout evolution will run on: sectors when the state has no inter-sector
/// coherence and H conserves excitation number, otherwise the full basis.
std::shared_ptr<const BasisLayout> evolution_layout(const QuantumState& state, const LindbladGenerator& gen);

/// Evolve under exp(t L). The result has the representation of the input.
QuantumState evolve(const QuantumState& state, const LindbladGenerator& gen, double duration,
                    const IntegratorConfig& cfg = {}, IntegrationStats* stats = nullptr);

/// Population of |1> on site `label` at times k * dt for k = 0..count-1. One
/// spectral pass or one RKF pass with dense output.
std::vector<double> site_population_profile(const QuantumState& state, const LindbladGenerator& gen, int label,
                                            double dt, int count, const IntegratorConfig& cfg = {});

}  // namespace spinfridge
