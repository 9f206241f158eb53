#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinfridge/channel_checks.hpp"
#include "spinfridge/oracles.hpp"
#include "spinfridge/protocol.hpp"

using namespace spinfridge;

namespace {

struct Sample {
  int n;
  double gamma;
  double tau;
  SpinNetwork net;
};

Sample draw(std::mt19937_64& rng, int max_sites) {
  const int n = std::uniform_int_distribution<int>(1, max_sites)(rng);
  const double gamma = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double tau = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
  return {n, gamma, tau, random_xxz_network(n, 1.0, rng)};
}

class SeededProperty : public ::testing::TestWithParam<std::uint64_t> {};

}  // namespace

TEST_P(SeededProperty, EvolutionPreservesStateInvariants) {
  std::mt19937_64 rng(GetParam());
  const Sample s = draw(rng, 4);
  const LindbladGenerator gen(Hamiltonian::from_network(s.net), s.gamma);
  for (Representation repr : {Representation::Dense, Representation::SectorBlocked}) {
    const QuantumState rho = random_state(s.net.reg(), rng, repr);
    const QuantumState out = evolve(rho, gen, s.tau);
    EXPECT_NEAR(out.trace(), 1.0, 1e-10);
    EXPECT_LT(hermiticity_defect(out.to_dense()), 1e-12);
    EXPECT_GT(out.min_eigenvalue(), -1e-10);
    EXPECT_NEAR(total_z_expectation(out), total_z_expectation(rho), 1e-8);
    EXPECT_LE(von_neumann_entropy(rho), von_neumann_entropy(out) + 1e-9);
  }
  const QuantumState mixed = maximally_mixed(s.net.reg());
  EXPECT_LT(trace_distance(evolve(mixed, gen, s.tau), mixed), 1e-10);
}

TEST_P(SeededProperty, CoolStepNeverHeats) {
  std::mt19937_64 rng(GetParam() ^ 0x5bd1e995u);
  const Sample s = draw(rng, 4);
  const double bath = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
  std::vector<QuantumState> factors;
  for (int i = 1; i <= s.n; ++i) {
    factors.push_back(thermal_qubit(bath + std::exponential_distribution<double>(1.0)(rng), i));
  }
  QuantumState probe = product_state(factors);
  const LindbladGenerator gen(Hamiltonian::from_network(s.net), s.gamma);
  SwapSpec swap = SwapSpec::perfect();
  if (GetParam() % 2 == 0) swap = SwapSpec::partial(std::uniform_real_distribution<double>(0.5, 20.0)(rng));
  for (int k = 0; k < 3; ++k) {
    const StepOutcome out = cool_step(probe, bath, gen, swap, s.net, s.tau, 1.0);
    const TemperatureRecord t = temperature_of(out.qubit_out);
    EXPECT_GE(t.beta_tilde, bath - 1e-9) << "step " << k;
    EXPECT_GE(von_neumann_entropy(out.probe) - von_neumann_entropy(probe),
              thermal_entropy(bath) - von_neumann_entropy(out.qubit_out) - 1e-9);
    probe = out.probe;
  }
}

TEST_P(SeededProperty, PseudoThermalStateIsFixed) {
  std::mt19937_64 rng(GetParam() + 17);
  const Sample s = draw(rng, 4);
  const double bath = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  const QuantumState chi = thermal_product(bath, s.n);
  const LindbladGenerator gen(Hamiltonian::from_network(s.net), s.gamma);
  const SwapSpec swap = GetParam() % 2 ? SwapSpec::perfect() : SwapSpec::partial(3.0);
  const StepOutcome out = cool_step(chi, bath, gen, swap, s.net, s.tau, 1.0);
  EXPECT_LT(trace_distance(out.probe, chi), 1e-8);
  EXPECT_LT(trace_distance(out.qubit_out, thermal_qubit(bath, out.qubit_out.reg().labels()[0])), 1e-8);
}

TEST_P(SeededProperty, TraceDistanceContracts) {
  std::mt19937_64 rng(GetParam() * 31 + 5);
  const Sample s = draw(rng, 3);
  const LindbladGenerator gen(Hamiltonian::from_network(s.net), s.gamma);
  const QuantumState a = random_state(s.net.reg(), rng);
  const QuantumState b = random_state(s.net.reg(), rng);
  EXPECT_LE(trace_distance(evolve(a, gen, s.tau), evolve(b, gen, s.tau)), trace_distance(a, b) + 1e-10);
}

TEST_P(SeededProperty, PartialTraceAndSubadditivity) {
  std::mt19937_64 rng(GetParam() * 7 + 1);
  const int n = std::uniform_int_distribution<int>(2, 4)(rng);
  const SpinRegister reg = SpinRegister::probe(n);
  const QuantumState rho = random_state(reg, rng);
  const int cut = std::uniform_int_distribution<int>(1, n - 1)(rng);
  std::vector<int> a, b;
  for (int i = 1; i <= n; ++i) (i <= cut ? a : b).push_back(i);
  const QuantumState ra = partial_trace(rho, a);
  const QuantumState rb = partial_trace(rho, b);
  EXPECT_NEAR(ra.trace(), 1.0, 1e-12);
  EXPECT_NEAR(rb.trace(), 1.0, 1e-12);
  EXPECT_LE(von_neumann_entropy(rho), von_neumann_entropy(ra) + von_neumann_entropy(rb) + 1e-9);
}

TEST_P(SeededProperty, TraceDistanceIsAMetric) {
  std::mt19937_64 rng(GetParam() * 13 + 3);
  const SpinRegister reg = SpinRegister::probe(std::uniform_int_distribution<int>(1, 4)(rng));
  const QuantumState a = random_state(reg, rng);
  const QuantumState b = random_state(reg, rng);
  const QuantumState c = random_state(reg, rng);
  EXPECT_EQ(trace_distance(a, b), trace_distance(b, a));
  EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-10);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-14);
}

TEST_P(SeededProperty, SemigroupAndPolarizedFixedPoint) {
  std::mt19937_64 rng(GetParam() * 101);
  const Sample s = draw(rng, 4);
  const LindbladGenerator gen(Hamiltonian::from_network(s.net), s.gamma);
  const QuantumState rho = random_state(s.net.reg(), rng, Representation::SectorBlocked);
  const double t1 = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  const double t2 = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  EXPECT_LT(trace_distance(evolve(rho, gen, t1 + t2), evolve(evolve(rho, gen, t1), gen, t2)), 1e-8);
  const QuantumState polarized = basis_state(s.net.reg(), (1u << s.n) - 1);
  EXPECT_LT(trace_distance(evolve(polarized, gen, s.tau), polarized), 1e-12);
}

TEST_P(SeededProperty, LongEvolutionStaysPhysical) {
  std::mt19937_64 rng(GetParam() * 57 + 9);
  const Sample s = draw(rng, 4);
  const LindbladGenerator gen(Hamiltonian::from_network(s.net), s.gamma);
  const QuantumState out = evolve(random_state(s.net.reg(), rng), gen, 20.0);
  EXPECT_NEAR(out.trace(), 1.0, 1e-9);
  EXPECT_LT(hermiticity_defect(out.to_dense()), 1e-12);
  EXPECT_GT(out.min_eigenvalue(), -1e-10);
}

TEST_P(SeededProperty, ProtocolStatesRoundTripThroughSectors) {
  std::mt19937_64 rng(GetParam() * 3 + 2);
  ProtocolConfig cfg;
  cfg.probe_size = std::uniform_int_distribution<int>(1, 4)(rng);
  cfg.steps = 4;
  cfg.gamma = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
  cfg.record_probe_states = true;
  for (const QuantumState& p : run_protocol(cfg).probe_states) {
    const QuantumState dense = sector_recompose(p);
    EXPECT_LT((sector_decompose(dense).to_dense() - p.to_dense()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Temperature, RoundTripOverLogGrid) {
  for (int i = 0; i <= 60; ++i) {
    const double beta = 1e-4 * std::pow(50.0 / 1e-4, i / 60.0);
    EXPECT_NEAR(temperature_of(thermal_qubit(beta)).beta_tilde, beta, 1e-10) << beta;
  }
  EXPECT_EQ(temperature_of(thermal_qubit(0.0)).beta_tilde, 0.0);
  EXPECT_EQ(temperature_of(thermal_qubit(kInfiniteBeta)).beta_tilde, kInfiniteBeta);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SeededProperty, ::testing::Range<std::uint64_t>(1, 21));
