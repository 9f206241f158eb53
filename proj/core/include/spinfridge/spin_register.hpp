#pragma once

#include <cstdint>
#include <vector>

namespace spinfridge {

/// Ordered, unique site labels of a spin-1/2 register. The first label is the
/// most significant bit of the computational-basis index; bit value 1 is |1>.
/// Label 0 is conventionally the attached thermal qubit, probe sites are 1..N.
class SpinRegister {
 public:
  explicit SpinRegister(std::vector<int> labels);

  /// Sites 1..n.
  static SpinRegister probe(int n);
  /// Sites first..first+n-1.
  static SpinRegister range(int first, int n);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  std::uint64_t dimension() const noexcept { return std::uint64_t{1} << labels_.size(); }
  const std::vector<int>& labels() const noexcept { return labels_; }

  bool contains(int label) const noexcept;
  /// Position of `label` in the register (0 = most significant). Throws DomainError.
  int position(int label) const;
  /// Bit index of `label` in a basis index (0 = least significant).
  int bit(int label) const { return size() - 1 - position(label); }

  /// Concatenation in argument order. Keeps labels when the result is strictly
  /// increasing, otherwise relabels the sites 1..n.
  SpinRegister concat(const SpinRegister& other) const;

  bool operator==(const SpinRegister&) const = default;

 private:
  std::vector<int> labels_;
};

}  // namespace spinfridge
