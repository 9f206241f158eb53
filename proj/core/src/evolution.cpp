#include "spinfridge/evolution.hpp"

#include <cmath>
#include <functional>
#include <span>

#include <Eigen/Eigenvalues>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

std::pair<std::shared_ptr<const BasisLayout>, BlockMatrices> storage_on(const QuantumState& state,
                                                                        const std::shared_ptr<const BasisLayout>& layout) {
  if (layout.get() == state.layout().get()) return {layout, state.data()};
  if (layout->is_sectored()) return {layout, sector_decompose(state, 0.0).data()};
  return {layout, BlockMatrices{state.to_dense()}};
}

QuantumState restore(const QuantumState& input, std::shared_ptr<const BasisLayout> layout, BlockMatrices data) {
  QuantumState out = QuantumState::from_layout(input.reg(), std::move(layout), std::move(data));
  if (input.is_blocked() == out.is_blocked()) return out;
  return input.is_blocked() ? sector_decompose(out) : sector_recompose(out);
}

}  // namespace

SpectralPropagator::SpectralPropagator(const Hamiltonian& h, std::shared_ptr<const BasisLayout> layout)
    : layout_(std::move(layout)), real_(h.is_real()) {
  for (int b = 0; b < layout_->num_blocks(); ++b) {
    const Matrix hb = h.block_matrix(*layout_, b);
    const Eigen::Index d = hb.rows();
    if (d == 0) {
      vectors_.emplace_back();
      real_vectors_.emplace_back();
      energies_.emplace_back();
      continue;
    }
    if (h.is_real()) {
      Eigen::SelfAdjointEigenSolver<RealMatrix> solver(hb.real());
      vectors_.push_back(solver.eigenvectors().cast<Complex>());
      real_vectors_.push_back(solver.eigenvectors());
      energies_.push_back(solver.eigenvalues());
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(hb);
      vectors_.push_back(solver.eigenvectors());
      real_vectors_.emplace_back();
      energies_.push_back(solver.eigenvalues());
    }
  }
}

BlockMatrices SpectralPropagator::propagate(const BlockMatrices& rho, double t) const {
  BlockMatrices out(rho.size());
  for (std::size_t b = 0; b < rho.size(); ++b) {
    const Matrix& v = vectors_[b];
    if (rho[b].size() == 0) {
      out[b] = rho[b];
      continue;
    }
    const RealVector& e = energies_[b];
    Vector phase(e.size());
    for (Eigen::Index a = 0; a < e.size(); ++a) phase(a) = std::exp(Complex{0.0, -e(a) * t});
    Matrix r;
    if (real_) {
      // real eigenvectors: rotate the real and imaginary parts separately
      const RealMatrix& w = real_vectors_[b];
      const RealMatrix re = w.transpose() * (rho[b].real() * w);
      const RealMatrix im = w.transpose() * (rho[b].imag() * w);
      Matrix tilde(re.rows(), re.cols());
      tilde.real() = re;
      tilde.imag() = im;
      tilde = phase.asDiagonal() * tilde * phase.conjugate().asDiagonal();
      const RealMatrix tr = tilde.real(), ti = tilde.imag();
      r.resize(tr.rows(), tr.cols());
      r.real() = w * (tr * w.transpose());
      r.imag() = w * (ti * w.transpose());
    } else {
      Matrix tilde = v.adjoint() * rho[b] * v;
      tilde = phase.asDiagonal() * tilde * phase.conjugate().asDiagonal();
      r = v * tilde * v.adjoint();
    }
    out[b] = 0.5 * (r + r.adjoint());
  }
  return out;
}

std::vector<double> SpectralPropagator::site_population_profile(const BlockMatrices& rho, int bit, double dt,
                                                                int count) const {
  std::vector<double> p1(static_cast<std::size_t>(count), 0.0);
  constexpr int kResync = 64;
  // Each pair a <= b contributes x_k = w Re(m e^{-i theta k}), theta = (E_a - E_b) dt,
  // which obeys x_{k+1} = 2 cos(theta) x_k - x_{k-1}.
  std::vector<double> amp_re, amp_im, theta, two_cos, cur, prev;
  for (int b = 0; b < layout_->num_blocks(); ++b) {
    const auto idx = static_cast<std::size_t>(b);
    const Eigen::Index d = rho[idx].rows();
    if (d == 0) continue;
    auto states = layout_->states(b);
    RealVector proj(d);
    for (Eigen::Index p = 0; p < d; ++p) proj(p) = (states[static_cast<std::size_t>(p)] >> bit) & 1u;
    if (proj.sum() == 0.0 || rho[idx].cwiseAbs().maxCoeff() == 0.0) continue;
    const Matrix& v = vectors_[idx];
    const Matrix rt = v.adjoint() * rho[idx] * v;
    const Matrix pt = v.adjoint() * proj.asDiagonal() * v;
    const RealVector& e = energies_[idx];
    double constant = 0.0;
    for (Eigen::Index a = 0; a < d; ++a) {
      constant += (pt(a, a) * rt(a, a)).real();
      for (Eigen::Index c = a + 1; c < d; ++c) {
        // pairs (a, c) and (c, a) are complex conjugates
        const Complex m = 2.0 * pt(c, a) * rt(a, c);
        if (m == Complex{}) continue;
        amp_re.push_back(m.real());
        amp_im.push_back(m.imag());
        theta.push_back((e(a) - e(c)) * dt);
      }
    }
    for (double& x : p1) x += constant;
  }
  const std::size_t pairs = theta.size();
  two_cos.resize(pairs);
  cur.resize(pairs);
  prev.resize(pairs);
  for (std::size_t i = 0; i < pairs; ++i) two_cos[i] = 2.0 * std::cos(theta[i]);
  auto exact = [&](std::size_t i, int k) {
    const double ph = theta[i] * k;
    return amp_re[i] * std::cos(ph) + amp_im[i] * std::sin(ph);
  };
  for (int k = 0; k < count; ++k) {
    double acc = 0.0;
    if (k % kResync == 0 || k == 1) {
      for (std::size_t i = 0; i < pairs; ++i) {
        prev[i] = k == 0 ? 0.0 : exact(i, k - 1);
        cur[i] = exact(i, k);
        acc += cur[i];
      }
    } else {
      for (std::size_t i = 0; i < pairs; ++i) {
        const double next = two_cos[i] * cur[i] - prev[i];
        prev[i] = cur[i];
        cur[i] = next;
        acc += next;
      }
    }
    p1[static_cast<std::size_t>(k)] += acc;
  }
  return p1;
}

bool uses_spectral(const LindbladGenerator& gen, const IntegratorConfig& cfg) {
  switch (cfg.propagator) {
    case Propagator::Rkf45:
      return false;
    case Propagator::Spectral:
      if (!gen.is_closed()) throw DomainError("spectral propagator requested for an open generator");
      return true;
    case Propagator::Auto:
      return gen.is_closed();
  }
  return false;
}

std::shared_ptr<const BasisLayout> evolution_layout(const QuantumState& state, const LindbladGenerator& gen) {
  if (gen.reg() != state.reg()) throw DomainError("generator and state registers differ");
  if (!gen.supports_sectors()) return BasisLayout::full(state.num_sites());
  if (state.is_blocked() || max_inter_sector_coherence(state) == 0.0) return BasisLayout::sectors(state.num_sites());
  return BasisLayout::full(state.num_sites());
}

namespace {

using BlockSampler = std::function<void(int block, std::size_t sample, const Matrix& rho)>;

// The generator never couples different blocks, so each one is integrated on
// its own with independent step control; this keeps the working set small.
void integrate_blocks(const LindbladGenerator& gen, const std::shared_ptr<const BasisLayout>& layout,
                      BlockMatrices& data, double duration, const IntegratorConfig& cfg,
                      std::span<const double> times, const BlockSampler* sampler, IntegrationStats& total) {
  auto compiled = gen.compile(layout);
  Matrix scratch;
  for (int b = 0; b < layout->num_blocks(); ++b) {
    const auto bi = static_cast<std::size_t>(b);
    if (data[bi].size() == 0) continue;
    BlockMatrices y(1);
    y[0] = std::move(data[bi]);
    BlockRhs rhs = [&](const BlockMatrices& v, BlockMatrices& dv) { compiled->apply_block(bi, v[0], dv[0], scratch); };
    std::size_t sample = 0;
    BlockObserver observer;
    if (sampler) observer = [&](double, const BlockMatrices& v) { (*sampler)(b, sample++, v[0]); };
    const IntegrationStats s = rkf45(rhs, y, duration, gen.rate(), cfg, times, observer);
    total.accepted += s.accepted;
    total.rejected += s.rejected;
    total.rhs_evaluations += s.rhs_evaluations;
    data[bi] = std::move(y[0]);
  }
}

}  // namespace

QuantumState evolve(const QuantumState& state, const LindbladGenerator& gen, double duration,
                    const IntegratorConfig& cfg, IntegrationStats* stats) {
  if (!(duration >= 0.0)) throw DomainError("duration must be >= 0");
  auto [layout, data] = storage_on(state, evolution_layout(state, gen));
  if (duration == 0.0) return restore(state, layout, std::move(data));
  if (uses_spectral(gen, cfg)) {
    auto prop = gen.spectral(layout);
    return restore(state, layout, prop->propagate(data, duration));
  }
  IntegrationStats total;
  integrate_blocks(gen, layout, data, duration, cfg, {}, nullptr, total);
  if (stats) *stats = total;
  return restore(state, layout, std::move(data));
}

std::vector<double> site_population_profile(const QuantumState& state, const LindbladGenerator& gen, int label,
                                            double dt, int count, const IntegratorConfig& cfg) {
  if (count < 1) throw DomainError("profile needs at least one sample");
  if (!(dt > 0.0)) throw DomainError("profile spacing must be positive");
  auto [layout, data] = storage_on(state, evolution_layout(state, gen));
  const int bit = state.reg().bit(label);
  if (uses_spectral(gen, cfg)) return gen.spectral(layout)->site_population_profile(data, bit, dt, count);

  std::vector<double> times(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) times[static_cast<std::size_t>(k)] = k * dt;
  std::vector<double> p1(times.size(), 0.0);
  BlockSampler sampler = [&](int b, std::size_t sample, const Matrix& m) {
    auto states = layout->states(b);
    double acc = 0.0;
    for (std::size_t p = 0; p < states.size(); ++p) {
      if ((states[p] >> bit) & 1u) acc += m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)).real();
    }
    p1[sample] += acc;
  };
  IntegrationStats total;
  integrate_blocks(gen, layout, data, times.back(), cfg, times, &sampler, total);
  return p1;
}

}  // namespace spinfridge
