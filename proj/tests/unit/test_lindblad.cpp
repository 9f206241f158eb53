#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinfridge/channel_checks.hpp"
#include "spinfridge/errors.hpp"
#include "spinfridge/evolution.hpp"
#include "spinfridge/lindblad.hpp"
#include "spinfridge/swap.hpp"
#include "spinfridge/temperature.hpp"

using namespace spinfridge;

namespace {

Matrix dense_lindblad(const Matrix& h, double gamma, int n, const Matrix& rho) {
  Matrix out = -kI * (h * rho - rho * h);
  for (int s = 0; s < n; ++s) {
    const Matrix z = embed_site_operator(pauli::z(), s, n);
    out += gamma * (z * rho * z - rho);
  }
  return out;
}

// exp(tL) applied to rho through the vectorized superoperator.
Matrix superoperator_evolve(const Matrix& h, double gamma, int n, const Matrix& rho, double t) {
  const Eigen::Index d = rho.rows();
  Matrix l = Matrix::Zero(d * d, d * d);
  for (Eigen::Index c = 0; c < d * d; ++c) {
    Matrix e = Matrix::Zero(d, d);
    e(c % d, c / d) = 1.0;
    const Matrix col = dense_lindblad(h, gamma, n, e);
    l.col(c) = Eigen::Map<const Vector>(col.data(), d * d);
  }
  const Matrix prop = (l * t).exp();
  const Vector v = prop * Eigen::Map<const Vector>(rho.data(), d * d);
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Generator, MatchesDenseFormula) {
  std::mt19937_64 rng(11);
  SpinNetwork net = SpinNetwork::uniform_chain(4, 0.8);
  net.set_bond(1, 3, -0.4, 1.7);
  net.set_field(2, 0.3);
  const Hamiltonian h = Hamiltonian::from_network(net);
  const LindbladGenerator gen(h, 0.37);
  for (Representation repr : {Representation::Dense, Representation::SectorBlocked}) {
    const QuantumState rho = random_state(net.reg(), rng, repr);
    const Matrix expected = dense_lindblad(h.dense(), 0.37, 4, rho.to_dense());
    EXPECT_LT(max_abs(apply_generator(gen, rho) - expected), 1e-13);
  }
}

TEST(Generator, PartialDephasingMask) {
  std::mt19937_64 rng(3);
  const Hamiltonian h = Hamiltonian::from_network(SpinNetwork::uniform_chain(3, 1.0));
  const LindbladGenerator gen(h, 0.5, std::vector<int>{2});
  EXPECT_EQ(gen.dephased_mask(), 0b010u);
  const QuantumState rho = random_state(h.reg(), rng);
  Matrix expected = -kI * (h.dense() * rho.to_dense() - rho.to_dense() * h.dense());
  const Matrix z = embed_site_operator(pauli::z(), 1, 3);
  expected += 0.5 * (z * rho.to_dense() * z - rho.to_dense());
  EXPECT_LT(max_abs(apply_generator(gen, rho) - expected), 1e-13);
  EXPECT_THROW(LindbladGenerator(h, -0.1), DomainError);
  EXPECT_FALSE(gen.is_closed());
  EXPECT_TRUE(gen.closed().is_closed());
}

TEST(Evolution, SingleQubitDephasingDecay) {
  const SpinRegister q({1});
  Matrix plus = 0.5 * Matrix::Ones(2, 2);
  const QuantumState rho = QuantumState::dense(q, plus);
  const double gamma = 0.7;
  const LindbladGenerator gen(Hamiltonian::zero(q), gamma);
  for (double t : {0.1, 1.0, 3.0}) {
    const QuantumState out = evolve(rho, gen, t);
    EXPECT_NEAR(out.element(0, 1).real(), 0.5 * std::exp(-2.0 * gamma * t), 1e-9) << "t = " << t;
    EXPECT_NEAR(out.element(0, 1).imag(), 0.0, 1e-12);
    EXPECT_NEAR(out.element(0, 0).real(), 0.5, 1e-12);
  }
}

TEST(Evolution, RkfMatchesMatrixExponential) {
  std::mt19937_64 rng(21);
  const SpinNetwork net = SpinNetwork::uniform_chain(3, 1.0);
  const Hamiltonian h = Hamiltonian::from_network(net);
  const QuantumState rho = random_state(net.reg(), rng);
  IntegratorConfig cfg;
  cfg.propagator = Propagator::Rkf45;
  for (double gamma : {0.0, 0.2}) {
    const LindbladGenerator gen(h, gamma);
    const Matrix expected = superoperator_evolve(h.dense(), gamma, 3, rho.to_dense(), 10.0);
    const QuantumState out = evolve(rho, gen, 10.0, cfg);
    EXPECT_LT(max_abs(out.to_dense() - expected), 1e-7) << "gamma = " << gamma;
  }
}

TEST(Evolution, SpectralMatchesRkf) {
  std::mt19937_64 rng(8);
  SpinNetwork net = SpinNetwork::uniform_chain(5, 1.0);
  const LindbladGenerator gen(Hamiltonian::from_network(net), 0.0);
  const QuantumState rho = random_state(net.reg(), rng, Representation::SectorBlocked);
  IntegratorConfig rkf;
  rkf.propagator = Propagator::Rkf45;
  IntegratorConfig spec;
  spec.propagator = Propagator::Spectral;
  const QuantumState a = evolve(rho, gen, 4.3, rkf);
  const QuantumState b = evolve(rho, gen, 4.3, spec);
  EXPECT_LT(max_abs(a.to_dense() - b.to_dense()), 1e-8);
  EXPECT_TRUE(uses_spectral(gen, {}));

  // complex Hamiltonian
  const Observable y1(SpinRegister::probe(2), embed_site_operator(pauli::y(), 0, 2));
  const LindbladGenerator gy(Hamiltonian::from_observable(y1), 0.0);
  const QuantumState r2 = random_state(y1.reg(), rng);
  EXPECT_LT(max_abs(evolve(r2, gy, 1.3, rkf).to_dense() - evolve(r2, gy, 1.3, spec).to_dense()), 1e-8);

  const LindbladGenerator open(Hamiltonian::from_network(net), 0.1);
  EXPECT_THROW(uses_spectral(open, spec), DomainError);
  EXPECT_FALSE(uses_spectral(open, {}));
}

TEST(Evolution, BlockedAndDenseAgree) {
  std::mt19937_64 rng(4);
  const SpinNetwork net = SpinNetwork::uniform_chain(4, 1.0);
  const LindbladGenerator gen(Hamiltonian::from_network(net), 0.25);
  const QuantumState blocked = random_state(net.reg(), rng, Representation::SectorBlocked);
  const QuantumState dense = sector_recompose(blocked);
  IntegrationStats sb, sd;
  const QuantumState a = evolve(blocked, gen, 2.0, {}, &sb);
  const QuantumState b = evolve(dense, gen, 2.0, {}, &sd);
  EXPECT_TRUE(a.is_blocked());
  EXPECT_FALSE(b.is_blocked());
  EXPECT_LT(max_abs(a.to_dense() - b.to_dense()), 1e-8);
  EXPECT_GT(sb.accepted, 0);
  EXPECT_GT(sd.rhs_evaluations, 0);
  EXPECT_EQ(evolution_layout(blocked, gen).get(), BasisLayout::sectors(4).get());
  // a dense state without inter-sector coherence still runs blocked
  EXPECT_EQ(evolution_layout(dense, gen).get(), BasisLayout::sectors(4).get());
  EXPECT_EQ(evolution_layout(random_state(net.reg(), rng), gen).get(), BasisLayout::full(4).get());
}

TEST(Evolution, TwoSpinExchangeAtQuarterPeriod) {
  // J sigma.sigma for pi/(4J) maps |10><10| to |01><01| up to phase.
  const SpinNetwork net = SpinNetwork::uniform_chain(2, 1.0);
  const LindbladGenerator gen(Hamiltonian::from_network(net), 0.0);
  const QuantumState in = basis_state(net.reg(), 0b10);
  IntegratorConfig cfg;
  cfg.propagator = Propagator::Rkf45;
  const QuantumState out = evolve(in, gen, std::numbers::pi / 4.0, cfg);
  EXPECT_NEAR(out.element(0b01, 0b01).real(), 1.0, 1e-9);
  EXPECT_NEAR(trace_distance(out, basis_state(net.reg(), 0b01)), 0.0, 1e-8);
}

TEST(Evolution, ProfileMatchesRepeatedEvolve) {
  std::mt19937_64 rng(13);
  const SpinNetwork net = SpinNetwork::uniform_chain(4, 1.0);
  const QuantumState rho = random_state(net.reg(), rng, Representation::SectorBlocked);
  for (double gamma : {0.0, 0.3}) {
    const LindbladGenerator gen(Hamiltonian::from_network(net), gamma);
    const auto profile = site_population_profile(rho, gen, 1, 0.25, 9);
    ASSERT_EQ(profile.size(), 9u);
    EXPECT_NEAR(profile[0], site_populations(rho, 1)[1], 1e-14);
    for (int k : {3, 8}) {
      const QuantumState s = evolve(rho, gen, 0.25 * k);
      EXPECT_NEAR(profile[static_cast<std::size_t>(k)], site_populations(s, 1)[1], 1e-8) << gamma << " " << k;
    }
  }
}

TEST(Integrator, ScalarExponential) {
  BlockMatrices y{Matrix::Constant(1, 1, Complex(1.0, 0.0))};
  const BlockRhs rhs = [](const BlockMatrices& s, BlockMatrices& d) { d[0] = Complex(-1.0, 2.0) * s[0]; };
  std::vector<double> samples{0.5, 1.0, 2.0};
  std::vector<Complex> seen;
  const IntegrationStats st = rkf45(rhs, y, 2.0, 1.0, {}, samples, [&](double, const BlockMatrices& s) {
    seen.push_back(s[0](0, 0));
  });
  ASSERT_EQ(seen.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(seen[i] - std::exp(Complex(-1.0, 2.0) * samples[i])), 1e-9);
  }
  EXPECT_LT(std::abs(y[0](0, 0) - std::exp(Complex(-2.0, 4.0))), 1e-9);
  EXPECT_GT(st.accepted, 0);
}

TEST(Integrator, ReportsStepLimit) {
  BlockMatrices y{Matrix::Constant(1, 1, Complex(1.0, 0.0))};
  const BlockRhs rhs = [](const BlockMatrices& s, BlockMatrices& d) { d[0] = Complex(0.0, -1.0) * s[0]; };
  IntegratorConfig cfg;
  cfg.max_steps = 5;
  try {
    rkf45(rhs, y, 100.0, 1.0, cfg);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 100.0);
    EXPECT_GT(e.step(), 0.0);
  }
  cfg = {};
  cfg.rel_tol = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Swap, PartialSwapLimitIsTheSwapGate) {
  const QuantumState joint = product_state({thermal_qubit(0.2, 0), basis_state(SpinRegister({1}), 1)});
  const SpinNetwork probe = SpinNetwork::uniform_chain(1, 1.0);
  SwapSpec spec = SwapSpec::partial(50.0);
  spec.background = false;
  spec.qubit_gap = 0.0;
  const QuantumState out = partial_swap(joint, spec, probe);
  const QuantumState ideal = perfect_swap(joint, 0, 1);
  EXPECT_LT(trace_distance(out, ideal), 1e-8);
  EXPECT_NEAR(spec.duration(), std::numbers::pi / 200.0, 1e-15);
  EXPECT_THROW(SwapSpec::partial(0.0).validate(), DomainError);
}
