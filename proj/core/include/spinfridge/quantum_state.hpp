#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "spinfridge/linalg.hpp"
#include "spinfridge/sector_basis.hpp"
#include "spinfridge/spin_register.hpp"

namespace spinfridge {

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
/// Eigenvalues in [-kEigenvalueFloor, 0) are treated as zero; anything more
/// negative is reported as a StateError.
inline constexpr double kEigenvalueFloor = 1e-10;
inline constexpr double kSectorMixingTol = 1e-12;

enum class Representation { Dense, SectorBlocked };

/// Density matrix of a labelled spin register.
///
/// Stored either as one dense 2^N x 2^N matrix or as the N+1 excitation-sector
/// blocks of a state with no inter-sector coherence. Both share the
/// BlockMatrices storage; the dense form is a single block over the full
/// basis. Immutable after construction. Hermiticity and unit trace are checked
/// on construction; positivity is checked by validate() and by every spectral
/// operation (entropy, temperature).
class QuantumState {
 public:
  static QuantumState dense(SpinRegister reg, Matrix rho);
  static QuantumState blocked(SpinRegister reg, BlockMatrices blocks);
  /// Same as above but takes storage laid out per `layout` (sectors or full).
  static QuantumState from_layout(SpinRegister reg, std::shared_ptr<const BasisLayout> layout,
                                  BlockMatrices data);

  const SpinRegister& reg() const noexcept { return reg_; }
  int num_sites() const noexcept { return reg_.size(); }
  std::uint64_t dimension() const noexcept { return reg_.dimension(); }
  Representation representation() const noexcept {
    return layout_->is_sectored() ? Representation::SectorBlocked : Representation::Dense;
  }
  bool is_blocked() const noexcept { return layout_->is_sectored(); }

  const std::shared_ptr<const BasisLayout>& layout() const noexcept { return layout_; }
  /// Raw storage: one matrix per layout block.
  const BlockMatrices& data() const noexcept { return data_; }
  /// Sector block l (requires the blocked form).
  const Matrix& block(int l) const;
  /// Dense matrix (requires the dense form); see to_dense() for conversion.
  const Matrix& matrix() const;

  Matrix to_dense() const;
  Complex element(std::uint32_t row, std::uint32_t col) const;
  double trace() const;
  /// Smallest eigenvalue over all blocks (unclamped).
  double min_eigenvalue() const;
  /// Full invariant check including positivity; throws StateError.
  void validate() const;

 private:
  QuantumState(SpinRegister reg, std::shared_ptr<const BasisLayout> layout, BlockMatrices data);

  SpinRegister reg_;
  std::shared_ptr<const BasisLayout> layout_;
  BlockMatrices data_;
};

/// Tensor product in list order; the register is the concatenation. Result is
/// blocked when every factor is blocked.
QuantumState product_state(std::span<const QuantumState> factors);
QuantumState product_state(std::initializer_list<QuantumState> factors);

/// Reduced state on `keep` (labels of the register, any order; result ordered
/// as in the register).
QuantumState partial_trace(const QuantumState& state, std::vector<int> keep);

/// -sum lambda ln lambda in nats.
double von_neumann_entropy(const QuantumState& state);

/// (1/2) ||a - b||_1.
double trace_distance(const QuantumState& a, const QuantumState& b);

/// Eigenvalues per block with the round-off floor applied, ascending.
std::vector<RealVector> block_spectra(const QuantumState& state);

/// Largest |rho_ij| with i, j in different excitation sectors.
double max_inter_sector_coherence(const QuantumState& state);

/// Dense -> blocked. Throws StateError("sector mixing present") when any
/// inter-sector coherence exceeds `tol`. Blocked input is returned unchanged.
QuantumState sector_decompose(const QuantumState& state, double tol = kSectorMixingTol);
/// Blocked -> dense. Dense input is returned unchanged.
QuantumState sector_recompose(const QuantumState& state);

/// (<0|rho_n|0>, <1|rho_n|1>) for site `label`.
std::array<double, 2> site_populations(const QuantumState& state, int label);

/// sum_n tr[sigma^z_n rho].
double total_z_expectation(const QuantumState& state);

/// Exchange the states of two sites (conjugation by the two-site SWAP).
QuantumState swap_sites(const QuantumState& state, int label_a, int label_b);

QuantumState maximally_mixed(const SpinRegister& reg, Representation repr = Representation::SectorBlocked);
/// |index><index| in the computational basis.
QuantumState basis_state(const SpinRegister& reg, std::uint32_t index,
                         Representation repr = Representation::SectorBlocked);

}  // namespace spinfridge
