#include "spinfridge/spin_network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "spinfridge/errors.hpp"

namespace spinfridge {

SpinNetwork::SpinNetwork(SpinRegister reg) : reg_(std::move(reg)) {}

SpinNetwork SpinNetwork::uniform_chain(int n, double j, int first) {
  if (n < 1) throw DomainError("chain needs at least one site");
  SpinNetwork net(SpinRegister::range(first, n));
  for (int i = 0; i + 1 < n; ++i) net.set_bond(first + i, first + i + 1, j, 1.0);
  return net;
}

SpinNetwork& SpinNetwork::set_bond(int a, int b, double j, double delta) {
  if (a == b) throw DomainError("bond endpoints must differ");
  if (!reg_.contains(a) || !reg_.contains(b)) throw DomainError("bond endpoint outside the register");
  if (!std::isfinite(j) || !std::isfinite(delta)) throw DomainError("bond parameters must be finite");
  bonds_[{std::min(a, b), std::max(a, b)}] = {j, delta};
  return *this;
}

SpinNetwork& SpinNetwork::set_field(int label, double h) {
  if (!reg_.contains(label)) throw DomainError("field site outside the register");
  if (!std::isfinite(h)) throw DomainError("field must be finite");
  fields_[label] = h;
  return *this;
}

std::vector<Bond> SpinNetwork::bonds() const {
  std::vector<Bond> out;
  out.reserve(bonds_.size());
  for (const auto& [key, value] : bonds_) out.push_back({key.first, key.second, value.first, value.second});
  return out;
}

double SpinNetwork::coupling(int a, int b) const {
  auto it = bonds_.find({std::min(a, b), std::max(a, b)});
  return it == bonds_.end() ? 0.0 : it->second.first;
}

double SpinNetwork::anisotropy(int a, int b) const {
  auto it = bonds_.find({std::min(a, b), std::max(a, b)});
  return it == bonds_.end() ? 0.0 : it->second.second;
}

SpinNetwork SpinNetwork::embedded_in(const SpinRegister& larger) const {
  SpinNetwork out(larger);
  for (const auto& [key, value] : bonds_) out.set_bond(key.first, key.second, value.first, value.second);
  for (const auto& [label, h] : fields_) out.set_field(label, h);
  return out;
}

double SpinNetwork::max_rate() const {
  double r = 0.0;
  for (const auto& [key, value] : bonds_) {
    r = std::max({r, std::abs(value.first), std::abs(value.first * value.second)});
  }
  for (const auto& [label, h] : fields_) r = std::max(r, std::abs(h));
  return r;
}

Observable::Observable(SpinRegister reg, Matrix m) : reg_(std::move(reg)), m_(std::move(m)) {
  const auto dim = static_cast<Eigen::Index>(reg_.dimension());
  if (m_.rows() != dim || m_.cols() != dim) throw DomainError("observable dimension does not match register");
  if (hermiticity_defect(m_) > 1e-12) throw DomainError("observable is not Hermitian");
}

Matrix CsrBlock::to_dense() const {
  Matrix out = Matrix::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int p = row_ptr[static_cast<std::size_t>(r)]; p < row_ptr[static_cast<std::size_t>(r) + 1]; ++p) {
      out(r, col[static_cast<std::size_t>(p)]) = val[static_cast<std::size_t>(p)];
    }
  }
  return out;
}

Hamiltonian::Hamiltonian(SpinRegister reg, std::vector<Entry> entries, double rate)
    : reg_(std::move(reg)), entries_(std::move(entries)), rate_(rate) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& x, const Entry& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      merged.back().v += e.v;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.v == Complex{}; });
  entries_ = std::move(merged);
  for (const Entry& e : entries_) {
    if (std::popcount(e.row) != std::popcount(e.col)) conserves_ = false;
    if (e.v.imag() != 0.0) real_ = false;
  }
}

Hamiltonian Hamiltonian::from_network(const SpinNetwork& net) {
  const SpinRegister& reg = net.reg();
  const std::uint32_t dim = static_cast<std::uint32_t>(reg.dimension());
  std::vector<Entry> entries;
  std::vector<double> diag(dim, 0.0);
  for (const Bond& bond : net.bonds()) {
    const int ba = reg.bit(bond.a);
    const int bb = reg.bit(bond.b);
    const std::uint32_t flip = (1u << ba) | (1u << bb);
    for (std::uint32_t s = 0; s < dim; ++s) {
      const bool za = ((s >> ba) & 1u) == 0;
      const bool zb = ((s >> bb) & 1u) == 0;
      // sigma^z eigenvalue is +1 on |0>, -1 on |1>
      diag[s] += bond.j * bond.delta * (za == zb ? 1.0 : -1.0);
      // XX + YY = 2 (sigma^+ sigma^- + h.c.) flips 01 <-> 10 with amplitude 2
      if (za != zb && bond.j != 0.0) entries.push_back({s ^ flip, s, Complex{2.0 * bond.j, 0.0}});
    }
  }
  for (const auto& [label, h] : net.fields()) {
    const int bit = reg.bit(label);
    for (std::uint32_t s = 0; s < dim; ++s) diag[s] += h * (((s >> bit) & 1u) == 0 ? 1.0 : -1.0);
  }
  for (std::uint32_t s = 0; s < dim; ++s) {
    if (diag[s] != 0.0) entries.push_back({s, s, Complex{diag[s], 0.0}});
  }
  return Hamiltonian(reg, std::move(entries), net.max_rate());
}

Hamiltonian Hamiltonian::from_observable(const Observable& obs) {
  const Matrix& m = obs.matrix();
  std::vector<Entry> entries;
  double rate = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) == Complex{}) continue;
      entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), m(r, c)});
      rate = std::max(rate, std::abs(m(r, c)));
    }
  }
  return Hamiltonian(obs.reg(), std::move(entries), rate);
}

Hamiltonian Hamiltonian::zero(const SpinRegister& reg) { return Hamiltonian(reg, {}, 0.0); }

Matrix Hamiltonian::dense() const {
  const auto dim = static_cast<Eigen::Index>(reg_.dimension());
  Matrix out = Matrix::Zero(dim, dim);
  for (const Entry& e : entries_) out(e.row, e.col) = e.v;
  return out;
}

Observable Hamiltonian::observable() const { return Observable(reg_, dense()); }

BlockOperator Hamiltonian::restrict_to(std::shared_ptr<const BasisLayout> layout) const {
  if (layout->num_sites() != reg_.size()) throw DomainError("layout size does not match Hamiltonian register");
  if (layout->is_sectored() && !conserves_) throw DomainError("Hamiltonian couples excitation sectors");
  BlockOperator op;
  op.blocks.resize(static_cast<std::size_t>(layout->num_blocks()));
  for (int b = 0; b < layout->num_blocks(); ++b) {
    auto& blk = op.blocks[static_cast<std::size_t>(b)];
    blk.dim = static_cast<int>(layout->block_dim(b));
    blk.row_ptr.assign(static_cast<std::size_t>(blk.dim) + 1, 0);
  }
  // entries are sorted by global row; local rows within a block keep that order
  for (const Entry& e : entries_) {
    auto& blk = op.blocks[static_cast<std::size_t>(layout->block_of(e.row))];
    ++blk.row_ptr[layout->offset_of(e.row) + 1];
  }
  for (auto& blk : op.blocks) {
    for (std::size_t r = 1; r < blk.row_ptr.size(); ++r) blk.row_ptr[r] += blk.row_ptr[r - 1];
    blk.col.resize(static_cast<std::size_t>(blk.row_ptr.back()));
    blk.val.resize(static_cast<std::size_t>(blk.row_ptr.back()));
  }
  std::vector<std::vector<int>> fill(op.blocks.size());
  for (std::size_t b = 0; b < op.blocks.size(); ++b) {
    fill[b].assign(op.blocks[b].row_ptr.begin(), op.blocks[b].row_ptr.end() - 1);
  }
  for (const Entry& e : entries_) {
    const auto b = static_cast<std::size_t>(layout->block_of(e.row));
    const auto pos = static_cast<std::size_t>(fill[b][layout->offset_of(e.row)]++);
    op.blocks[b].col[pos] = static_cast<int>(layout->offset_of(e.col));
    op.blocks[b].val[pos] = e.v;
  }
  op.layout = std::move(layout);
  return op;
}

Matrix Hamiltonian::block_matrix(const BasisLayout& layout, int block) const {
  if (layout.is_sectored() && !conserves_) throw DomainError("Hamiltonian couples excitation sectors");
  const auto d = static_cast<Eigen::Index>(layout.block_dim(block));
  Matrix out = Matrix::Zero(d, d);
  for (const Entry& e : entries_) {
    if (layout.block_of(e.row) != block) continue;
    out(layout.offset_of(e.row), layout.offset_of(e.col)) = e.v;
  }
  return out;
}

Observable heisenberg_hamiltonian(int n, double j) {
  if (n < 1) throw DomainError("Heisenberg chain needs at least one site");
  return xxz_network_hamiltonian(SpinNetwork::uniform_chain(n, j));
}

Observable xxz_network_hamiltonian(const SpinNetwork& net) { return Hamiltonian::from_network(net).observable(); }

Matrix total_z_operator(int num_sites) {
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << num_sites);
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    out(s, s) = num_sites - 2 * std::popcount(static_cast<std::uint32_t>(s));
  }
  return out;
}

}  // namespace spinfridge
