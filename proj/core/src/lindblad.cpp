#include "spinfridge/lindblad.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>

#include "spinfridge/errors.hpp"
#include "spinfridge/evolution.hpp"

namespace spinfridge {

struct LindbladGenerator::Cache {
  std::mutex mutex;
  std::map<const BasisLayout*, std::shared_ptr<const Compiled>> compiled;
  std::map<const BasisLayout*, std::shared_ptr<const SpectralPropagator>> spectral;
};

LindbladGenerator::LindbladGenerator(Hamiltonian h, double gamma, std::optional<std::vector<int>> dephased_sites)
    : h_(std::move(h)), gamma_(gamma), cache_(std::make_shared<Cache>()) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("dephasing rate must be finite and >= 0");
  const std::vector<int> sites = dephased_sites ? *dephased_sites : reg().labels();
  for (int label : sites) mask_ |= 1u << reg().bit(label);
}

double LindbladGenerator::rate() const noexcept {
  const double r = std::max(h_.rate(), is_closed() ? 0.0 : gamma_);
  return r > 0.0 ? r : 1.0;
}

LindbladGenerator LindbladGenerator::closed() const { return LindbladGenerator(h_, 0.0); }

std::shared_ptr<const LindbladGenerator::Compiled> LindbladGenerator::compile(
    const std::shared_ptr<const BasisLayout>& layout) const {
  std::lock_guard lock(cache_->mutex);
  auto& slot = cache_->compiled[layout.get()];
  if (slot) return slot;
  auto c = std::make_shared<Compiled>();
  c->h = h_.restrict_to(layout);
  if (!is_closed()) {
    for (int b = 0; b < layout->num_blocks(); ++b) {
      auto states = layout->states(b);
      const auto d = static_cast<Eigen::Index>(states.size());
      RealMatrix w(d, d);
      for (Eigen::Index q = 0; q < d; ++q) {
        for (Eigen::Index p = 0; p < d; ++p) {
          w(p, q) = -2.0 * gamma_ * std::popcount((states[p] ^ states[q]) & mask_);
        }
      }
      c->decay.push_back(std::move(w));
    }
  }
  slot = c;
  return slot;
}

std::shared_ptr<const SpectralPropagator> LindbladGenerator::spectral(
    const std::shared_ptr<const BasisLayout>& layout) const {
  if (!is_closed()) throw DomainError("spectral propagation requires a closed (Gamma = 0) generator");
  std::lock_guard lock(cache_->mutex);
  auto& slot = cache_->spectral[layout.get()];
  if (!slot) slot = std::make_shared<SpectralPropagator>(h_, layout);
  return slot;
}

void LindbladGenerator::Compiled::apply(const BlockMatrices& rho, BlockMatrices& out, Matrix& scratch) const {
  for (std::size_t b = 0; b < rho.size(); ++b) apply_block(b, rho[b], out[b], scratch);
}

void LindbladGenerator::Compiled::apply_block(std::size_t b, const Matrix& r, Matrix& o, Matrix& scratch) const {
  {
    const CsrBlock& hb = h.blocks[b];
    const Eigen::Index d = r.rows();
    if (d == 0) return;
    scratch.resize(d, d);
    // scratch = rho H, column by column; column c of a Hermitian H is the
    // conjugate of CSR row c
    for (Eigen::Index c = 0; c < d; ++c) {
      auto y = scratch.col(c);
      y.setZero();
      for (int p = hb.row_ptr[static_cast<std::size_t>(c)]; p < hb.row_ptr[static_cast<std::size_t>(c) + 1]; ++p) {
        const Complex v = hb.val[static_cast<std::size_t>(p)];
        const auto j = static_cast<Eigen::Index>(hb.col[static_cast<std::size_t>(p)]);
        if (v.imag() == 0.0) {
          y += v.real() * r.col(j);
        } else {
          y += std::conj(v) * r.col(j);
        }
      }
    }
    // -i[H, rho] = i (rho H - (rho H)^dagger), filled from the upper triangle
    const Complex* s = scratch.data();
    const Complex* rd = r.data();
    Complex* od = o.data();
    const double* w = decay.empty() ? nullptr : decay[b].data();
    constexpr Eigen::Index kTile = 32;
    for (Eigen::Index c0 = 0; c0 < d; c0 += kTile) {
      const Eigen::Index c1 = std::min(d, c0 + kTile);
      for (Eigen::Index i0 = 0; i0 <= c0; i0 += kTile) {
        const Eigen::Index i1 = std::min(d, i0 + kTile);
        for (Eigen::Index c = c0; c < c1; ++c) {
          const Eigen::Index iend = std::min(i1, c + 1);
          for (Eigen::Index i = i0; i < iend; ++i) {
            const Complex a = s[i + c * d];
            const Complex t = s[c + i * d];
            // i (a - conj(t))
            Complex v{-(a.imag() + t.imag()), a.real() - t.real()};
            if (w) v += w[i + c * d] * rd[i + c * d];
            od[i + c * d] = v;
            od[c + i * d] = std::conj(v);
          }
        }
      }
    }
  }
}

Matrix apply_generator(const LindbladGenerator& gen, const QuantumState& state) {
  if (gen.reg() != state.reg()) throw DomainError("generator and state registers differ");
  const QuantumState& s = state;
  auto layout = s.layout();
  const BlockMatrices* data = &s.data();
  BlockMatrices dense_storage;
  if (layout->is_sectored() && !gen.supports_sectors()) {
    layout = BasisLayout::full(s.num_sites());
    dense_storage.push_back(s.to_dense());
    data = &dense_storage;
  }
  auto compiled = gen.compile(layout);
  BlockMatrices out(data->size());
  for (std::size_t b = 0; b < data->size(); ++b) out[b].resize((*data)[b].rows(), (*data)[b].cols());
  Matrix scratch;
  compiled->apply(*data, out, scratch);
  if (!layout->is_sectored()) return out[0];
  const auto dim = static_cast<Eigen::Index>(s.dimension());
  Matrix full = Matrix::Zero(dim, dim);
  for (int b = 0; b < layout->num_blocks(); ++b) {
    auto states = layout->states(b);
    for (std::size_t q = 0; q < states.size(); ++q) {
      for (std::size_t p = 0; p < states.size(); ++p) {
        full(states[p], states[q]) = out[static_cast<std::size_t>(b)](static_cast<Eigen::Index>(p),
                                                                      static_cast<Eigen::Index>(q));
      }
    }
  }
  return full;
}

}  // namespace spinfridge
