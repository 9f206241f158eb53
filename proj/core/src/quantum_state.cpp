#include "spinfridge/quantum_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void check_shapes(const BasisLayout& layout, const BlockMatrices& data) {
  if (static_cast<int>(data.size()) != layout.num_blocks()) {
    throw DomainError("state storage has " + std::to_string(data.size()) + " blocks, layout expects " +
                      std::to_string(layout.num_blocks()));
  }
  for (int b = 0; b < layout.num_blocks(); ++b) {
    const auto dim = static_cast<Eigen::Index>(layout.block_dim(b));
    const Matrix& m = data[static_cast<std::size_t>(b)];
    if (m.rows() != dim || m.cols() != dim) {
      throw DomainError("block " + std::to_string(b) + " has shape " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected " + std::to_string(dim));
    }
  }
}

// Gather the bits of `index` at positions `bits` (most significant first) into
// a compact index.
std::uint32_t gather_bits(std::uint32_t index, const std::vector<int>& bits) {
  std::uint32_t out = 0;
  for (int b : bits) out = (out << 1) | ((index >> b) & 1u);
  return out;
}

RealVector clamp_spectrum(RealVector ev) {
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -kEigenvalueFloor) {
      throw StateError("negative eigenvalue " + format_double(ev(i)) + " below round-off floor");
    }
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

}  // namespace

QuantumState::QuantumState(SpinRegister reg, std::shared_ptr<const BasisLayout> layout, BlockMatrices data)
    : reg_(std::move(reg)), layout_(std::move(layout)), data_(std::move(data)) {
  if (layout_->num_sites() != reg_.size()) throw DomainError("layout and register sizes differ");
  check_shapes(*layout_, data_);
  double defect = 0.0;
  for (const auto& m : data_) defect = std::max(defect, hermiticity_defect(m));
  if (defect > kHermiticityTol) throw StateError("density matrix not Hermitian (defect " + format_double(defect) + ")");
  const double tr = trace();
  if (std::abs(tr - 1.0) > kTraceTol) throw StateError("density matrix trace " + format_double(tr) + " != 1");
}

QuantumState QuantumState::dense(SpinRegister reg, Matrix rho) {
  auto layout = BasisLayout::full(reg.size());
  BlockMatrices data;
  data.push_back(std::move(rho));
  return QuantumState(std::move(reg), std::move(layout), std::move(data));
}

QuantumState QuantumState::blocked(SpinRegister reg, BlockMatrices blocks) {
  auto layout = BasisLayout::sectors(reg.size());
  return QuantumState(std::move(reg), std::move(layout), std::move(blocks));
}

QuantumState QuantumState::from_layout(SpinRegister reg, std::shared_ptr<const BasisLayout> layout,
                                       BlockMatrices data) {
  return QuantumState(std::move(reg), std::move(layout), std::move(data));
}

const Matrix& QuantumState::block(int l) const {
  if (!is_blocked()) throw DomainError("state is not in sector-blocked form");
  if (l < 0 || l > num_sites()) throw DomainError("sector index out of range");
  return data_[static_cast<std::size_t>(l)];
}

const Matrix& QuantumState::matrix() const {
  if (is_blocked()) throw DomainError("state is sector-blocked; use to_dense()");
  return data_[0];
}

Matrix QuantumState::to_dense() const {
  if (!is_blocked()) return data_[0];
  const auto dim = static_cast<Eigen::Index>(dimension());
  Matrix out = Matrix::Zero(dim, dim);
  for (int b = 0; b < layout_->num_blocks(); ++b) {
    auto states = layout_->states(b);
    const Matrix& m = data_[static_cast<std::size_t>(b)];
    for (std::size_t q = 0; q < states.size(); ++q) {
      for (std::size_t p = 0; p < states.size(); ++p) {
        out(states[p], states[q]) = m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      }
    }
  }
  return out;
}

Complex QuantumState::element(std::uint32_t row, std::uint32_t col) const {
  const int br = layout_->block_of(row);
  if (br != layout_->block_of(col)) return Complex{0.0, 0.0};
  return data_[static_cast<std::size_t>(br)](layout_->offset_of(row), layout_->offset_of(col));
}

double QuantumState::trace() const {
  double t = 0.0;
  for (const auto& m : data_) t += m.trace().real();
  return t;
}

double QuantumState::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& m : data_) {
    if (m.size() == 0) continue;
    lo = std::min(lo, hermitian_eigenvalues(m).minCoeff());
  }
  return lo;
}

void QuantumState::validate() const {
  const double lo = min_eigenvalue();
  if (lo < -kEigenvalueFloor) throw StateError("density matrix not positive (min eigenvalue " + format_double(lo) + ")");
}

QuantumState product_state(std::span<const QuantumState> factors) {
  if (factors.empty()) throw DomainError("product_state needs at least one factor");
  QuantumState acc = factors[0];
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const QuantumState& b = factors[f];
    SpinRegister reg = acc.reg().concat(b.reg());
    const int nb = b.num_sites();
    if (acc.is_blocked() && b.is_blocked()) {
      auto layout = BasisLayout::sectors(reg.size());
      BlockMatrices out;
      for (int l = 0; l < layout->num_blocks(); ++l) {
        const auto d = static_cast<Eigen::Index>(layout->block_dim(l));
        out.emplace_back(Matrix::Zero(d, d));
      }
      const auto& la = *acc.layout();
      const auto& lb = *b.layout();
      for (int ea = 0; ea < la.num_blocks(); ++ea) {
        auto sa = la.states(ea);
        const Matrix& ma = acc.data()[static_cast<std::size_t>(ea)];
        for (int eb = 0; eb < lb.num_blocks(); ++eb) {
          auto sb = lb.states(eb);
          const Matrix& mb = b.data()[static_cast<std::size_t>(eb)];
          Matrix& target = out[static_cast<std::size_t>(ea + eb)];
          for (std::size_t qa = 0; qa < sa.size(); ++qa) {
            for (std::size_t pa = 0; pa < sa.size(); ++pa) {
              const Complex va = ma(static_cast<Eigen::Index>(pa), static_cast<Eigen::Index>(qa));
              if (va == Complex{}) continue;
              for (std::size_t qb = 0; qb < sb.size(); ++qb) {
                const std::uint32_t col = layout->offset_of((sa[qa] << nb) | sb[qb]);
                for (std::size_t pb = 0; pb < sb.size(); ++pb) {
                  const std::uint32_t row = layout->offset_of((sa[pa] << nb) | sb[pb]);
                  target(row, col) = va * mb(static_cast<Eigen::Index>(pb), static_cast<Eigen::Index>(qb));
                }
              }
            }
          }
        }
      }
      acc = QuantumState::from_layout(std::move(reg), std::move(layout), std::move(out));
    } else {
      acc = QuantumState::dense(std::move(reg), kron(acc.to_dense(), b.to_dense()));
    }
  }
  return acc;
}

QuantumState product_state(std::initializer_list<QuantumState> factors) {
  return product_state(std::span<const QuantumState>(factors.begin(), factors.size()));
}

QuantumState partial_trace(const QuantumState& state, std::vector<int> keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep set must be non-empty");
  const SpinRegister& reg = state.reg();
  for (int label : keep) {
    if (!reg.contains(label)) throw DomainError("partial_trace: site " + std::to_string(label) + " not in register");
  }
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw DomainError("partial_trace: duplicate site");

  SpinRegister out_reg(keep);
  std::vector<int> keep_bits;
  std::uint32_t trace_mask = 0;
  for (int label : reg.labels()) {
    const int bit = reg.bit(label);
    if (std::binary_search(keep.begin(), keep.end(), label)) {
      keep_bits.push_back(bit);
    } else {
      trace_mask |= (1u << bit);
    }
  }
  if (trace_mask == 0) return state;

  auto out_layout = state.is_blocked() ? BasisLayout::sectors(out_reg.size()) : BasisLayout::full(out_reg.size());
  BlockMatrices out;
  for (int b = 0; b < out_layout->num_blocks(); ++b) {
    const auto d = static_cast<Eigen::Index>(out_layout->block_dim(b));
    out.emplace_back(Matrix::Zero(d, d));
  }

  const auto& in_layout = *state.layout();
  for (int b = 0; b < in_layout.num_blocks(); ++b) {
    auto states = in_layout.states(b);
    const Matrix& m = state.data()[static_cast<std::size_t>(b)];
    std::vector<std::uint32_t> reduced(states.size());
    for (std::size_t p = 0; p < states.size(); ++p) reduced[p] = gather_bits(states[p], keep_bits);
    for (std::size_t q = 0; q < states.size(); ++q) {
      const std::uint32_t tq = states[q] & trace_mask;
      const std::uint32_t rq = reduced[q];
      Matrix& target = out[static_cast<std::size_t>(out_layout->block_of(rq))];
      const std::uint32_t col = out_layout->offset_of(rq);
      for (std::size_t p = 0; p < states.size(); ++p) {
        if ((states[p] & trace_mask) != tq) continue;
        target(out_layout->offset_of(reduced[p]), col) += m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      }
    }
  }
  return QuantumState::from_layout(std::move(out_reg), std::move(out_layout), std::move(out));
}

std::vector<RealVector> block_spectra(const QuantumState& state) {
  std::vector<RealVector> spectra;
  spectra.reserve(state.data().size());
  for (const auto& m : state.data()) spectra.push_back(clamp_spectrum(hermitian_eigenvalues(m)));
  return spectra;
}

double von_neumann_entropy(const QuantumState& state) {
  double s = 0.0;
  for (const auto& ev : block_spectra(state)) s += entropy_of_spectrum(ev);
  return s;
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (a.reg() != b.reg()) throw DomainError("trace_distance: register mismatch");
  double sum = 0.0;
  if (a.is_blocked() && b.is_blocked()) {
    for (std::size_t l = 0; l < a.data().size(); ++l) {
      const Matrix diff = a.data()[l] - b.data()[l];
      if (diff.size() == 0) continue;
      sum += hermitian_eigenvalues(diff).cwiseAbs().sum();
    }
  } else {
    sum = hermitian_eigenvalues(a.to_dense() - b.to_dense()).cwiseAbs().sum();
  }
  return 0.5 * sum;
}

double max_inter_sector_coherence(const QuantumState& state) {
  if (state.is_blocked()) return 0.0;
  const Matrix& m = state.matrix();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const int lj = std::popcount(static_cast<std::uint32_t>(j));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::popcount(static_cast<std::uint32_t>(i)) != lj) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

QuantumState sector_decompose(const QuantumState& state, double tol) {
  if (state.is_blocked()) return state;
  if (max_inter_sector_coherence(state) > tol) throw StateError("sector mixing present");
  auto layout = BasisLayout::sectors(state.num_sites());
  const Matrix& m = state.matrix();
  BlockMatrices blocks;
  for (int l = 0; l < layout->num_blocks(); ++l) {
    auto states = layout->states(l);
    Matrix blk(static_cast<Eigen::Index>(states.size()), static_cast<Eigen::Index>(states.size()));
    for (std::size_t q = 0; q < states.size(); ++q) {
      for (std::size_t p = 0; p < states.size(); ++p) {
        blk(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = m(states[p], states[q]);
      }
    }
    blocks.push_back(std::move(blk));
  }
  return QuantumState::from_layout(state.reg(), std::move(layout), std::move(blocks));
}

QuantumState sector_recompose(const QuantumState& state) {
  if (!state.is_blocked()) return state;
  return QuantumState::dense(state.reg(), state.to_dense());
}

std::array<double, 2> site_populations(const QuantumState& state, int label) {
  const int bit = state.reg().bit(label);
  std::array<double, 2> pops{0.0, 0.0};
  const auto& layout = *state.layout();
  for (int b = 0; b < layout.num_blocks(); ++b) {
    auto states = layout.states(b);
    const Matrix& m = state.data()[static_cast<std::size_t>(b)];
    for (std::size_t p = 0; p < states.size(); ++p) {
      pops[(states[p] >> bit) & 1u] += m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)).real();
    }
  }
  return pops;
}

double total_z_expectation(const QuantumState& state) {
  const int n = state.num_sites();
  double z = 0.0;
  const auto& layout = *state.layout();
  for (int b = 0; b < layout.num_blocks(); ++b) {
    auto states = layout.states(b);
    const Matrix& m = state.data()[static_cast<std::size_t>(b)];
    for (std::size_t p = 0; p < states.size(); ++p) {
      z += (n - 2 * std::popcount(states[p])) * m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)).real();
    }
  }
  return z;
}

QuantumState swap_sites(const QuantumState& state, int label_a, int label_b) {
  const int ba = state.reg().bit(label_a);
  const int bb = state.reg().bit(label_b);
  if (ba == bb) throw DomainError("swap_sites: sites must differ");
  auto swap_bits = [ba, bb](std::uint32_t s) {
    const std::uint32_t x = ((s >> ba) ^ (s >> bb)) & 1u;
    return s ^ ((x << ba) | (x << bb));
  };
  const auto& layout = *state.layout();
  BlockMatrices out;
  for (int b = 0; b < layout.num_blocks(); ++b) {
    auto states = layout.states(b);
    std::vector<std::uint32_t> image(states.size());
    for (std::size_t p = 0; p < states.size(); ++p) image[p] = layout.offset_of(swap_bits(states[p]));
    const Matrix& m = state.data()[static_cast<std::size_t>(b)];
    Matrix r(m.rows(), m.cols());
    for (std::size_t q = 0; q < states.size(); ++q) {
      for (std::size_t p = 0; p < states.size(); ++p) {
        r(image[p], image[q]) = m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      }
    }
    out.push_back(std::move(r));
  }
  return QuantumState::from_layout(state.reg(), state.layout(), std::move(out));
}

QuantumState maximally_mixed(const SpinRegister& reg, Representation repr) {
  auto layout = repr == Representation::SectorBlocked ? BasisLayout::sectors(reg.size()) : BasisLayout::full(reg.size());
  const double w = 1.0 / static_cast<double>(reg.dimension());
  BlockMatrices data;
  for (int b = 0; b < layout->num_blocks(); ++b) {
    const auto d = static_cast<Eigen::Index>(layout->block_dim(b));
    data.emplace_back(Matrix::Identity(d, d) * w);
  }
  return QuantumState::from_layout(reg, std::move(layout), std::move(data));
}

QuantumState basis_state(const SpinRegister& reg, std::uint32_t index, Representation repr) {
  if (index >= reg.dimension()) throw DomainError("basis_state: index out of range");
  auto layout = repr == Representation::SectorBlocked ? BasisLayout::sectors(reg.size()) : BasisLayout::full(reg.size());
  BlockMatrices data;
  for (int b = 0; b < layout->num_blocks(); ++b) {
    const auto d = static_cast<Eigen::Index>(layout->block_dim(b));
    data.emplace_back(Matrix::Zero(d, d));
  }
  const auto off = layout->offset_of(index);
  data[static_cast<std::size_t>(layout->block_of(index))](off, off) = 1.0;
  return QuantumState::from_layout(reg, std::move(layout), std::move(data));
}

}  // namespace spinfridge
