#include "spinfridge/channel_checks.hpp"

#include <cmath>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

Matrix ginibre_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = Complex{normal(rng), normal(rng)};
  }
  Matrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace().real();
}

}  // namespace

QuantumState random_state(const SpinRegister& reg, std::mt19937_64& rng, Representation repr) {
  if (repr == Representation::Dense) {
    return QuantumState::dense(reg, ginibre_density(static_cast<Eigen::Index>(reg.dimension()), rng));
  }
  auto layout = BasisLayout::sectors(reg.size());
  std::exponential_distribution<double> weight;
  std::vector<double> w(static_cast<std::size_t>(layout->num_blocks()));
  double total = 0.0;
  for (auto& x : w) total += (x = weight(rng));
  BlockMatrices blocks;
  for (int b = 0; b < layout->num_blocks(); ++b) {
    const double wb = w[static_cast<std::size_t>(b)] / total;
    blocks.push_back(wb * ginibre_density(static_cast<Eigen::Index>(layout->block_dim(b)), rng));
  }
  // fix the trace exactly after scaling
  const double tr = [&] {
    double t = 0.0;
    for (const auto& m : blocks) t += m.trace().real();
    return t;
  }();
  for (auto& m : blocks) m /= tr;
  return QuantumState::from_layout(reg, std::move(layout), std::move(blocks));
}

ChannelWitness conserves_z_excitation(const Channel& channel, const SpinRegister& reg, int trials, std::uint64_t seed,
                                      double tol) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  std::mt19937_64 rng(seed);
  ChannelWitness w;
  for (int t = 0; t < trials; ++t) {
    QuantumState rho = random_state(reg, rng);
    const double before = total_z_expectation(rho);
    const double after = total_z_expectation(channel(rho));
    const double dev = std::abs(after - before);
    w.deviation = std::max(w.deviation, dev);
    if (dev > tol && w.pass) {
      w.pass = false;
      w.counterexample = rho;
      w.trial = t;
    }
  }
  return w;
}

ChannelWitness is_unital(const Channel& channel, const SpinRegister& reg, double tol) {
  const QuantumState mixed = maximally_mixed(reg, Representation::Dense);
  const Matrix out = channel(mixed).to_dense();
  ChannelWitness w;
  w.deviation = (out - mixed.matrix()).cwiseAbs().maxCoeff();
  if (w.deviation > tol) {
    w.pass = false;
    w.counterexample = mixed;
    w.trial = 0;
  }
  return w;
}

}  // namespace spinfridge
