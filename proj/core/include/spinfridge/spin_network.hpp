#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "spinfridge/linalg.hpp"
#include "spinfridge/sector_basis.hpp"
#include "spinfridge/spin_register.hpp"

namespace spinfridge {

/// One XXZ bond J (Delta Z_a Z_b + X_a X_b + Y_a Y_b), a < b.
struct Bond {
  int a = 0;
  int b = 0;
  double j = 0.0;
  double delta = 1.0;
};

/// Interaction graph over a register plus optional longitudinal fields
/// h_n sigma^z_n. Coupling units are angular frequency.
class SpinNetwork {
 public:
  explicit SpinNetwork(SpinRegister reg);

  /// J_{n,n+1} = J, Delta = 1 on sites first..first+n-1.
  static SpinNetwork uniform_chain(int n, double j, int first = 1);

  /// Sets (or replaces) the bond between two sites; labels may come in any order.
  SpinNetwork& set_bond(int a, int b, double j, double delta = 1.0);
  SpinNetwork& set_field(int label, double h);

  const SpinRegister& reg() const noexcept { return reg_; }
  std::vector<Bond> bonds() const;
  const std::map<int, double>& fields() const noexcept { return fields_; }
  double coupling(int a, int b) const;
  double anisotropy(int a, int b) const;

  /// Same bonds and fields on a larger register containing this one.
  SpinNetwork embedded_in(const SpinRegister& larger) const;
  /// Largest |J|, |J Delta| or |h|; 0 for an empty network.
  double max_rate() const;

 private:
  SpinRegister reg_;
  std::map<std::pair<int, int>, std::pair<double, double>> bonds_;
  std::map<int, double> fields_;
};

/// Hermitian operator on a register.
class Observable {
 public:
  Observable(SpinRegister reg, Matrix m);

  const SpinRegister& reg() const noexcept { return reg_; }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  SpinRegister reg_;
  Matrix m_;
};

/// One block of a block-diagonal operator in compressed-row form, indices
/// local to the block.
struct CsrBlock {
  int dim = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<Complex> val;

  std::size_t nnz() const noexcept { return val.size(); }
  Matrix to_dense() const;
};

/// An operator restricted to a basis layout.
struct BlockOperator {
  std::shared_ptr<const BasisLayout> layout;
  std::vector<CsrBlock> blocks;
};

/// Sparse Hermitian Hamiltonian over the full computational basis.
class Hamiltonian {
 public:
  static Hamiltonian from_network(const SpinNetwork& net);
  static Hamiltonian from_observable(const Observable& obs);
  static Hamiltonian zero(const SpinRegister& reg);

  const SpinRegister& reg() const noexcept { return reg_; }
  bool conserves_excitation() const noexcept { return conserves_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  /// Characteristic rate used to scale integrator steps (>= 0).
  double rate() const noexcept { return rate_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  /// Real in the computational basis.
  bool is_real() const noexcept { return real_; }

  Matrix dense() const;
  Observable observable() const;
  /// Throws DomainError when the layout is sectored and the operator couples sectors.
  BlockOperator restrict_to(std::shared_ptr<const BasisLayout> layout) const;

  /// Dense matrix of block `block` of `layout` (same precondition as restrict_to).
  Matrix block_matrix(const BasisLayout& layout, int block) const;

 private:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Complex v;
  };
  Hamiltonian(SpinRegister reg, std::vector<Entry> entries, double rate);

  SpinRegister reg_;
  std::vector<Entry> entries_;
  double rate_ = 0.0;
  bool conserves_ = true;
  bool real_ = true;
};

/// J sum_{n=1}^{N-1} sigma_n . sigma_{n+1} on sites 1..N.
Observable heisenberg_hamiltonian(int n, double j);

/// sum J_{nm} (Delta_{nm} Z Z + X X + Y Y) + sum h_n Z_n.
Observable xxz_network_hamiltonian(const SpinNetwork& net);

/// sum_n sigma^z_n as a dense matrix.
Matrix total_z_operator(int num_sites);

}  // namespace spinfridge
