#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "spinfridge/channel_checks.hpp"
#include "spinfridge/errors.hpp"
#include "spinfridge/quantum_state.hpp"
#include "spinfridge/spin_network.hpp"
#include "spinfridge/temperature.hpp"

using namespace spinfridge;

namespace {

// Heisenberg chain built from explicit Kronecker products.
Matrix kron_chain_heisenberg(int n, double j) {
  const int dim = 1 << n;
  Matrix h = Matrix::Zero(dim, dim);
  const Matrix paulis[3] = {pauli::x(), pauli::y(), pauli::z()};
  for (int s = 0; s + 1 < n; ++s) {
    for (const Matrix& p : paulis) {
      Matrix term = Matrix::Identity(1, 1);
      for (int q = 0; q < n; ++q) term = kron(term, (q == s || q == s + 1) ? p : pauli::identity());
      h += j * term;
    }
  }
  return h;
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(SpinRegister, LabelsAndBits) {
  const SpinRegister r = SpinRegister::probe(4);
  EXPECT_EQ(r.size(), 4);
  EXPECT_EQ(r.dimension(), 16u);
  EXPECT_EQ(r.position(1), 0);
  EXPECT_EQ(r.bit(1), 3);
  EXPECT_EQ(r.bit(4), 0);
  EXPECT_TRUE(r.contains(3));
  EXPECT_FALSE(r.contains(0));
  EXPECT_THROW(r.position(7), DomainError);
  EXPECT_THROW(SpinRegister({2, 1}), DomainError);
  EXPECT_THROW(SpinRegister({}), DomainError);
  const SpinRegister joint = SpinRegister({0}).concat(r);
  EXPECT_EQ(joint.labels(), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(SectorBasis, BlockDimensionsAreBinomial) {
  auto layout = BasisLayout::sectors(6);
  ASSERT_EQ(layout->num_blocks(), 7);
  std::size_t total = 0;
  for (int l = 0; l <= 6; ++l) {
    EXPECT_EQ(layout->block_dim(l), binomial(6, l));
    auto states = layout->states(l);
    for (std::size_t i = 0; i < states.size(); ++i) {
      EXPECT_EQ(std::popcount(states[i]), l);
      EXPECT_EQ(layout->offset_of(states[i]), i);
      if (i > 0) {
        EXPECT_LT(states[i - 1], states[i]);
      }
    }
    total += states.size();
  }
  EXPECT_EQ(total, 64u);
  EXPECT_EQ(binomial(10, 5), 252u);
  EXPECT_EQ(BasisLayout::sectors(6).get(), layout.get());
  EXPECT_EQ(BasisLayout::full(3)->num_blocks(), 1);
}

TEST(Pauli, Algebra) {
  EXPECT_TRUE((pauli::x() * pauli::y()).isApprox(kI * pauli::z()));
  EXPECT_TRUE((pauli::z() * pauli::z()).isApprox(pauli::identity()));
  // sigma^z |0> = +|0>
  EXPECT_DOUBLE_EQ(pauli::z()(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(pauli::z()(1, 1).real(), -1.0);
}

TEST(Temperature, ThermalQubitPopulations) {
  const QuantumState chi = thermal_qubit(0.2);
  EXPECT_NEAR(chi.element(0, 0).real(), 0.45016600268752205, 1e-15);
  EXPECT_NEAR(chi.element(1, 1).real(), 0.549833997312478, 1e-15);
  EXPECT_NEAR(ground_population(0.2), 0.549833997312478, 1e-15);
  EXPECT_TRUE(chi.is_blocked());
  const TemperatureRecord t = temperature_of(chi);
  EXPECT_NEAR(t.beta_tilde, 0.2, 1e-14);
  EXPECT_NEAR(t.population_ratio, std::exp(0.2), 1e-14);
  EXPECT_NEAR(t.kt_over_omega(), 5.0, 1e-12);
}

TEST(Temperature, ThermalEntropyValues) {
  EXPECT_NEAR(thermal_entropy(0.2), 0.6881720699190963, 1e-12);
  EXPECT_NEAR(thermal_entropy(0.1), 0.691898741325677, 1e-12);
  EXPECT_NEAR(thermal_entropy(0.0), std::numbers::ln2, 1e-15);
  EXPECT_EQ(thermal_entropy(kInfiniteBeta), 0.0);
  EXPECT_NEAR(von_neumann_entropy(thermal_qubit(0.2)), thermal_entropy(0.2), 1e-14);
}

TEST(Temperature,LimitsAndErrors) {
  const QuantumState ground = thermal_qubit(kInfiniteBeta);
  EXPECT_TRUE(temperature_of(ground).is_zero_temperature());
  EXPECT_EQ(temperature_of(ground).kt_over_omega(), 0.0);
  EXPECT_EQ(temperature_of(thermal_qubit(0.0)).beta_tilde, 0.0);

  const SpinRegister q({1});
  Matrix coherent = 0.5 * Matrix::Ones(2, 2);
  EXPECT_THROW(temperature_of(QuantumState::dense(q, coherent)), StateError);
  EXPECT_THROW(temperature_of(QuantumState::dense(q, diag2(0.7, 0.3))), StateError);
  EXPECT_THROW(thermal_qubit(-0.1), DomainError);

  EXPECT_DOUBLE_EQ(cooling_efficiency(0.2, 0.4), 0.5);
  EXPECT_DOUBLE_EQ(cooling_efficiency(0.2, kInfiniteBeta), 1.0);
  EXPECT_DOUBLE_EQ(cooling_efficiency(0.2, 0.2), 0.0);
}

TEST(QuantumState, RejectsInvalidMatrices) {
  const SpinRegister q({1});
  EXPECT_THROW(QuantumState::dense(q, diag2(0.6, 0.6)), StateError);
  Matrix nonherm = diag2(0.5, 0.5);
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(QuantumState::dense(q, nonherm), StateError);
  const QuantumState neg = QuantumState::dense(q, diag2(1.2, -0.2));
  EXPECT_THROW(neg.validate(), StateError);
  EXPECT_THROW(von_neumann_entropy(neg), StateError);
}

TEST(QuantumState, ProductAndPartialTrace) {
  const QuantumState a = thermal_qubit(0.3, 0);
  const QuantumState b = thermal_qubit(1.1, 1);
  const QuantumState c = basis_state(SpinRegister({2}), 0);
  const QuantumState abc = product_state({a, b, c});
  EXPECT_TRUE(abc.is_blocked());
  // kron in register order
  const Matrix expected = kron(kron(a.to_dense(), b.to_dense()), c.to_dense());
  EXPECT_LT((abc.to_dense() - expected).cwiseAbs().maxCoeff(), 1e-15);

  EXPECT_LT((partial_trace(abc, {1}).to_dense() - b.to_dense()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((partial_trace(abc, {2, 0}).to_dense() - kron(a.to_dense(), c.to_dense())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(partial_trace(abc, {0, 2}).reg().labels(), (std::vector<int>{0, 2}));
  EXPECT_NEAR(partial_trace(abc, {1, 2}).trace(), 1.0, 1e-15);
}

TEST(QuantumState, DenseAndBlockedAgree) {
  std::mt19937_64 rng(5);
  const SpinRegister reg = SpinRegister::probe(4);
  const QuantumState blocked = random_state(reg, rng, Representation::SectorBlocked);
  const QuantumState dense = sector_recompose(blocked);
  EXPECT_FALSE(dense.is_blocked());
  EXPECT_NEAR(von_neumann_entropy(blocked), von_neumann_entropy(dense), 1e-12);
  EXPECT_NEAR(trace_distance(blocked, dense), 0.0, 1e-12);
  const QuantumState again = sector_decompose(dense);
  EXPECT_LT((again.to_dense() - blocked.to_dense()).cwiseAbs().maxCoeff(), 1e-15);
  for (int label : {1, 3}) {
    const auto pb = site_populations(blocked, label);
    const auto pd = site_populations(dense, label);
    EXPECT_NEAR(pb[0], pd[0], 1e-15);
    EXPECT_NEAR(pb[1], pd[1], 1e-15);
  }
  EXPECT_NEAR(total_z_expectation(blocked), total_z_expectation(dense), 1e-13);
}

TEST(QuantumState, SectorMixingDetected) {
  const SpinRegister reg({1});
  Matrix plus = 0.5 * Matrix::Ones(2, 2);
  const QuantumState s = QuantumState::dense(reg, plus);
  EXPECT_NEAR(max_inter_sector_coherence(s), 0.5, 1e-15);
  try {
    sector_decompose(s);
    FAIL() << "expected StateError";
  } catch (const StateError& e) {
    EXPECT_NE(std::string(e.what()).find("sector mixing present"), std::string::npos);
  }
}

TEST(QuantumState, EntropyAndDistanceKnownValues) {
  const SpinRegister reg = SpinRegister::probe(3);
  EXPECT_NEAR(von_neumann_entropy(maximally_mixed(reg)), 3.0 * std::numbers::ln2, 1e-13);
  EXPECT_NEAR(von_neumann_entropy(basis_state(reg, 5)), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(basis_state(reg, 0), basis_state(reg, 7)), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(thermal_qubit(0.2), thermal_qubit(1.0)),
              std::abs(ground_population(1.0) - ground_population(0.2)), 1e-15);
  EXPECT_NEAR(von_neumann_entropy(thermal_product(0.2, 3)), 3.0 * 0.6881720699190963, 1e-12);
}

TEST(QuantumState, SwapSitesExchangesFactors) {
  const QuantumState s = product_state({thermal_qubit(0.3, 1), thermal_qubit(2.0, 2), thermal_qubit(0.7, 3)});
  const QuantumState t = swap_sites(s, 1, 3);
  const QuantumState expected = product_state({thermal_qubit(0.7, 1), thermal_qubit(2.0, 2), thermal_qubit(0.3, 3)});
  EXPECT_LT(trace_distance(t, expected), 1e-15);
}

TEST(Hamiltonian, HeisenbergMatchesKroneckerConstruction) {
  for (int n = 2; n <= 5; ++n) {
    const Observable h = heisenberg_hamiltonian(n, 0.7);
    EXPECT_LT((h.matrix() - kron_chain_heisenberg(n, 0.7)).cwiseAbs().maxCoeff(), 1e-14) << "n = " << n;
  }
  const RealVector e = hermitian_eigenvalues(heisenberg_hamiltonian(2, 1.0).matrix());
  EXPECT_NEAR(e(0), -3.0, 1e-13);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(e(i), 1.0, 1e-13);
}

TEST(Hamiltonian, XxzBondElements) {
  SpinNetwork net(SpinRegister::probe(2));
  net.set_bond(1, 2, 0.5, 3.0);
  const Matrix h = Hamiltonian::from_network(net).dense();
  // J Delta z z on the diagonal, 2 J flip-flop between |01> and |10>
  EXPECT_NEAR(h(0, 0).real(), 1.5, 1e-15);
  EXPECT_NEAR(h(1, 1).real(), -1.5, 1e-15);
  EXPECT_NEAR(h(3, 3).real(), 1.5, 1e-15);
  EXPECT_NEAR(h(1, 2).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(h(0, 3)), 0.0, 1e-15);
  EXPECT_TRUE(Hamiltonian::from_network(net).conserves_excitation());
  EXPECT_TRUE(Hamiltonian::from_network(net).is_real());
}

TEST(Hamiltonian, FieldsAndExcitationConservation) {
  SpinNetwork net = SpinNetwork::uniform_chain(3, 1.0);
  net.set_field(2, 0.25);
  const Hamiltonian h = Hamiltonian::from_network(net);
  EXPECT_TRUE(h.conserves_excitation());
  const Matrix z = total_z_operator(3);
  EXPECT_LT((h.dense() * z - z * h.dense()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((h.dense() - xxz_network_hamiltonian(net).matrix()).cwiseAbs().maxCoeff(), 1e-15);

  const Observable x1(SpinRegister::probe(2), embed_site_operator(pauli::x(), 0, 2));
  const Hamiltonian hx = Hamiltonian::from_observable(x1);
  EXPECT_FALSE(hx.conserves_excitation());
  EXPECT_THROW(hx.restrict_to(BasisLayout::sectors(2)), DomainError);
}

TEST(Hamiltonian, BlockMatricesMatchDenseRestriction) {
  const Hamiltonian h = Hamiltonian::from_network(SpinNetwork::uniform_chain(5, 1.3));
  const Matrix full = h.dense();
  auto layout = BasisLayout::sectors(5);
  for (int b = 0; b < layout->num_blocks(); ++b) {
    const Matrix blk = h.block_matrix(*layout, b);
    auto states = layout->states(b);
    for (std::size_t p = 0; p < states.size(); ++p) {
      for (std::size_t q = 0; q < states.size(); ++q) {
        EXPECT_EQ(blk(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)), full(states[p], states[q]));
      }
    }
  }
}

TEST(Network, BondBookkeeping) {
  SpinNetwork net(SpinRegister::probe(3));
  net.set_bond(3, 1, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(net.coupling(1, 3), 2.0);
  EXPECT_DOUBLE_EQ(net.anisotropy(3, 1), 0.5);
  EXPECT_DOUBLE_EQ(net.coupling(1, 2), 0.0);
  EXPECT_EQ(net.bonds().size(), 1u);
  EXPECT_THROW(net.set_bond(1, 1, 1.0), DomainError);
  EXPECT_THROW(net.set_bond(1, 9, 1.0), DomainError);
  const SpinNetwork big = net.embedded_in(SpinRegister({0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(big.coupling(1, 3), 2.0);
  EXPECT_DOUBLE_EQ(net.max_rate(), 2.0);
}
