#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "spinfridge/quantum_state.hpp"
#include "spinfridge/spin_network.hpp"

namespace spinfridge {

class SpectralPropagator;

/// L(rho) = -i[H, rho] + Gamma sum_n (Z_n rho Z_n - rho), the sum running over
/// the dephased sites (all sites by default).
class LindbladGenerator {
 public:
  LindbladGenerator(Hamiltonian h, double gamma, std::optional<std::vector<int>> dephased_sites = std::nullopt);

  const Hamiltonian& hamiltonian() const noexcept { return h_; }
  const SpinRegister& reg() const noexcept { return h_.reg(); }
  double gamma() const noexcept { return gamma_; }
  /// Bit mask (basis-index bits) of the dephased sites.
  std::uint32_t dephased_mask() const noexcept { return mask_; }
  bool is_closed() const noexcept { return gamma_ == 0.0 || mask_ == 0; }
  /// max(rate(H), Gamma), or 1 when both vanish; sets the integrator time unit.
  double rate() const noexcept;

  /// Same Hamiltonian without dephasing.
  LindbladGenerator closed() const;

  /// Whether evolution can stay on the sector layout.
  bool supports_sectors() const noexcept { return h_.conserves_excitation(); }

  /// Right-hand side restricted to one layout. Thread-safe, cached.
  struct Compiled {
    BlockOperator h;
    /// Elementwise dephasing rates -2 Gamma popcount((I ^ J) & mask) per block;
    /// empty when there is no dephasing.
    std::vector<RealMatrix> decay;

    void apply(const BlockMatrices& rho, BlockMatrices& out, Matrix& scratch) const;
    void apply_block(std::size_t block, const Matrix& rho, Matrix& out, Matrix& scratch) const;
  };
  std::shared_ptr<const Compiled> compile(const std::shared_ptr<const BasisLayout>& layout) const;

  /// Eigendecomposition of H on a layout (closed evolution). Thread-safe, cached.
  std::shared_ptr<const SpectralPropagator> spectral(const std::shared_ptr<const BasisLayout>& layout) const;

 private:
  struct Cache;

  Hamiltonian h_;
  double gamma_;
  std::uint32_t mask_ = 0;
  std::shared_ptr<Cache> cache_;
};

/// d rho / dt as a dense matrix in the full computational basis.
Matrix apply_generator(const LindbladGenerator& gen, const QuantumState& state);

}  // namespace spinfridge
