#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "spinfridge/errors.hpp"
#include "spinfridge/protocol.hpp"
#include "spinfridge/thermometry.hpp"

using namespace spinfridge;

namespace {

ProtocolConfig ideal_config(int n, int steps, double beta = 0.2) {
  ProtocolConfig cfg;
  cfg.probe_size = n;
  cfg.steps = steps;
  cfg.bath_beta = beta;
  return cfg;
}

}  // namespace

TEST(Protocol, FirstStepIsPerfectlyCold) {
  const ProtocolReport r = run_protocol(ideal_config(3, 1));
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_DOUBLE_EQ(r.steps[0].eta, 1.0);
  EXPECT_TRUE(r.steps[0].qubit_out->is_zero_temperature());
  EXPECT_NEAR(r.delta_S_total[0], thermal_entropy(0.2), 1e-12);
  EXPECT_NEAR(r.steps[0].qubit_entropy, 0.0, 1e-12);
  EXPECT_NEAR(r.initial_probe_entropy, 0.0, 1e-14);
}

TEST(Protocol, ZeroStepsLeavesProbeUntouched) {
  const ProtocolReport r = run_protocol(ideal_config(3, 0));
  EXPECT_TRUE(r.steps.empty());
  EXPECT_TRUE(r.delta_S_total.empty());
  EXPECT_NEAR(trace_distance(r.final_probe, basis_state(SpinRegister::probe(3), 0b111)), 0.0, 1e-15);
}

TEST(Protocol, TwoSiteChainWaitsQuarterPeriod) {
  const ProtocolReport r = run_protocol(ideal_config(2, 2));
  // step 2: the cold excitation on site 2 returns to site 1 after J tau = pi/4
  EXPECT_NEAR(r.steps[1].tau, std::numbers::pi / 4.0, 0.006);
  EXPECT_GT(r.steps[1].qubit_populations[1], 0.999);
  EXPECT_GT(r.steps[1].eta, 0.5);
}

TEST(Protocol, PseudoThermalProbeIsStationary) {
  ProtocolConfig cfg = ideal_config(3, 3);
  cfg.probe_betas = {0.2, 0.2, 0.2};
  const ProtocolReport r = run_protocol(cfg);
  for (const StepRecord& s : r.steps) {
    EXPECT_DOUBLE_EQ(s.tau, 0.0);
    EXPECT_NEAR(s.eta, 0.0, 1e-9);
    EXPECT_NEAR(s.distance_to_pseudothermal, 0.0, 1e-10);
    EXPECT_NEAR(s.delta_S_qubit, 0.0, 1e-10);
  }
}

TEST(Protocol, CooledProbeTendsToBathTemperature) {
  const ProtocolReport r = run_protocol(ideal_config(3, 25));
  EXPECT_LT(r.steps.back().distance_to_pseudothermal, r.initial_distance);
  EXPECT_LT(r.steps.back().eta, r.steps.front().eta);
  for (std::size_t k = 1; k < r.steps.size(); ++k) {
    EXPECT_LE(r.steps[k].distance_to_pseudothermal, r.steps[k - 1].distance_to_pseudothermal + 1e-10) << k;
    EXPECT_GE(r.steps[k].beta_out, 0.2 - 1e-10);
  }
}

TEST(Protocol, EntropyAccountingHolds) {
  ProtocolConfig cfg = ideal_config(4, 10);
  const EntropyAudit ideal = entropy_accounting(run_protocol(cfg));
  EXPECT_TRUE(ideal.pass) << ideal.message;
  EXPECT_EQ(ideal.rows.size(), 10u);
  EXPECT_NEAR(ideal.bound, 4.0 * thermal_entropy(0.2), 1e-12);

  cfg.gamma = 0.3;
  cfg.steps = 6;
  const EntropyAudit open = entropy_accounting(run_protocol(cfg));
  EXPECT_TRUE(open.pass) << open.message;
}

TEST(Protocol, HotProbeIsRejectedOrDetected) {
  ProtocolConfig cfg = ideal_config(2, 1);
  cfg.probe_betas = {0.1, 0.1};
  EXPECT_THROW(cfg.validate(), DomainError);

  cfg.enforce_cooler_probe = false;
  const ProtocolReport r = run_protocol(cfg);
  EXPECT_LT(r.steps[0].eta, 0.0);
  EXPECT_NEAR(r.steps[0].eta, -1.0, 1e-9);
  EXPECT_LT(r.steps[0].delta_S_qubit, 0.0);
  const EntropyAudit audit = entropy_accounting(r);
  EXPECT_FALSE(audit.pass);
  EXPECT_EQ(audit.first_violation, 1);

  cfg.probe_betas = {0.0, 0.0};
  const ProtocolReport inf = run_protocol(cfg);
  EXPECT_EQ(inf.steps[0].beta_out, 0.0);
  EXPECT_EQ(inf.steps[0].eta, -std::numeric_limits<double>::infinity());
}

TEST(Protocol, FixedPolicyUsesGivenWaitingTime) {
  ProtocolConfig cfg = ideal_config(3, 4);
  cfg.policy = WaitingPolicy::Fixed;
  cfg.fixed_tau = 1.0;
  const ProtocolReport r = run_protocol(cfg);
  for (const StepRecord& s : r.steps) EXPECT_DOUBLE_EQ(s.tau, 1.0);
}

TEST(Protocol, PartialSwapApproachesPerfectSwap) {
  ProtocolConfig cfg = ideal_config(3, 5);
  const ProtocolReport perfect = run_protocol(cfg);
  cfg.swap = SwapSpec::partial(100.0);
  const ProtocolReport partial = run_protocol(cfg);
  cfg.swap = SwapSpec::partial(1.0);
  const ProtocolReport weak = run_protocol(cfg);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(partial.steps[k].eta, perfect.steps[k].eta, 0.03) << k;
  }
  EXPECT_LT(weak.delta_S_total.back(), partial.delta_S_total.back());
}

TEST(Protocol, ConfigValidation) {
  auto bad = [](auto mutate) {
    ProtocolConfig cfg;
    mutate(cfg);
    return cfg;
  };
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.probe_size = 0; }).validate(), DomainError);
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.gamma = -1.0; }).validate(), DomainError);
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.bath_beta = -0.5; }).validate(), DomainError);
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.steps = -1; }).validate(), DomainError);
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.coupling = 0.0; }).validate(), DomainError);
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.probe_betas = {1.0}; }).validate(), DomainError);
  EXPECT_THROW(bad([](ProtocolConfig& c) { c.swap = SwapSpec::partial(-2.0); }).validate(), DomainError);
  EXPECT_NO_THROW(ProtocolConfig{}.validate());
  ProtocolConfig inf;
  inf.bath_beta = 0.0;
  EXPECT_NO_THROW(inf.validate());
}

TEST(Protocol, OptimizerFindsEarliestMaximum) {
  const SpinNetwork net = SpinNetwork::uniform_chain(2, 1.0);
  const LindbladGenerator gen(Hamiltonian::from_network(net), 0.0);
  const QuantumState probe = product_state({thermal_qubit(0.2, 1), basis_state(SpinRegister({2}), 1)});
  const WaitingTime w = optimize_waiting_time(probe, gen, 1.0, 2.0);
  EXPECT_NEAR(w.tau, 0.79, 1e-12);
  EXPECT_EQ(w.grid_index, 79);
  EXPECT_GT(w.ground_population, 0.999);
  const WaitingTime again = optimize_waiting_time(probe, gen, 1.0, 0.5);
  EXPECT_NEAR(again.tau, 0.5, 1e-12);
}

TEST(Thermometry, EstimatorRecoversTemperature) {
  const QuantumState probe = thermal_product(0.5, 3);
  const TemperatureEstimate exact = exact_temperature_estimate(probe);
  EXPECT_NEAR(exact.beta_tilde, 0.5, 1e-12);
  const TemperatureEstimate est = estimate_temperature(probe, 20000, 42);
  EXPECT_EQ(est.n0 + est.n1, 60000u);
  EXPECT_NEAR(est.stderr_beta, std::sqrt(1.0 / est.n0 + 1.0 / est.n1), 1e-15);
  EXPECT_LT(std::abs(est.beta_tilde - 0.5), 4.0 * est.stderr_beta);
  EXPECT_NEAR(est.record().beta_tilde, est.beta_tilde, 0.0);
  const TemperatureEstimate same = estimate_temperature(probe, 20000, 42);
  EXPECT_EQ(same.n0, est.n0);
  EXPECT_THROW(estimate_temperature(probe, 0, 1), DomainError);
}

TEST(Thermometry, BoundaryAndInversionFlags) {
  const SpinRegister reg = SpinRegister::probe(2);
  const TemperatureEstimate cold = estimate_temperature(basis_state(reg, 0b11), 50, 1);
  EXPECT_TRUE(cold.boundary);
  EXPECT_EQ(cold.beta_tilde, kInfiniteBeta);
  const TemperatureEstimate hot = estimate_temperature(basis_state(reg, 0b00), 50, 1);
  EXPECT_TRUE(hot.inversion);
  EXPECT_THROW(hot.record(), StateError);
}
