#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace spinfridge {

/// Partition of the computational basis of `num_sites` spins into blocks.
///
/// The sector layout groups basis states by excitation number l (number of
/// spins in |1>), giving N+1 blocks of dimension C(N, l), each listing its
/// basis indices in ascending order. The full layout is a single block holding
/// every index, which lets the dense path share the blocked kernels.
class BasisLayout {
 public:
  /// Cached, immutable; safe to share across threads.
  static std::shared_ptr<const BasisLayout> sectors(int num_sites);
  static std::shared_ptr<const BasisLayout> full(int num_sites);

  int num_sites() const noexcept { return num_sites_; }
  bool is_sectored() const noexcept { return sectored_; }
  int num_blocks() const noexcept { return static_cast<int>(states_.size()); }
  std::size_t block_dim(int block) const { return states_[static_cast<std::size_t>(block)].size(); }
  std::span<const std::uint32_t> states(int block) const { return states_[static_cast<std::size_t>(block)]; }

  int block_of(std::uint32_t index) const;
  std::uint32_t offset_of(std::uint32_t index) const { return offset_[index]; }

  /// Excitation number (sector label) of a block. For the sector layout this
  /// is the block index; the full layout has no single label (returns -1).
  int excitation_of_block(int block) const noexcept { return sectored_ ? block : -1; }

 private:
  BasisLayout(int num_sites, bool sectored);

  int num_sites_;
  bool sectored_;
  std::vector<std::vector<std::uint32_t>> states_;
  std::vector<std::uint32_t> offset_;
};

/// Binomial coefficient C(n, k) as an integer.
std::uint64_t binomial(int n, int k);

}  // namespace spinfridge
