#include <gtest/gtest.h>

#include <random>

#include "spinfridge/channel_checks.hpp"
#include "spinfridge/errors.hpp"
#include "spinfridge/oracles.hpp"

using namespace spinfridge;

TEST(Oracles, AlwaysCoolsSmallSample) {
  AlwaysCoolsOptions opt;
  opt.trials = 40;
  opt.max_sites = 3;
  const OracleVerdict v = oracle_always_cools(opt);
  EXPECT_TRUE(v.pass) << (v.witness ? v.witness->description : "");
  EXPECT_EQ(v.trials, 40);
  EXPECT_GE(v.worst_margin, -1e-9);
}

TEST(Oracles, AlwaysCoolsCatchesHotSite) {
  AlwaysCoolsOptions opt;
  opt.trials = 20;
  opt.max_sites = 3;
  opt.inject_hot_site = true;
  opt.partial_fraction = 0.0;
  const OracleVerdict v = oracle_always_cools(opt);
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->description, "emitted qubit hotter than the bath");
  EXPECT_LT(v.worst_margin, 0.0);
  bool has_site = false;
  for (const auto& [k, val] : v.witness->values) has_site = has_site || k == "hot_site";
  EXPECT_TRUE(has_site);
}

TEST(Oracles, AlwaysCoolsIsDeterministicAcrossThreads) {
  AlwaysCoolsOptions opt;
  opt.trials = 12;
  opt.max_sites = 2;
  const OracleVerdict a = oracle_always_cools(opt);
  opt.threads = 3;
  const OracleVerdict b = oracle_always_cools(opt);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
  EXPECT_EQ(a.pass, b.pass);
}

TEST(Oracles, StationaryState) {
  StationaryOptions opt;
  opt.max_sites = 3;
  opt.tau_samples = 3;
  const OracleVerdict v = oracle_stationary_state(opt);
  EXPECT_TRUE(v.pass) << (v.witness ? v.witness->description : "");
  EXPECT_TRUE(v.secondary);
  EXPECT_EQ(v.trials, 12);
}

TEST(Oracles, StationaryStateNeedsDisplacement) {
  StationaryOptions opt;
  opt.max_sites = 2;
  opt.tau_samples = 2;
  opt.perturbed_factor = 1.0;
  const OracleVerdict v = oracle_stationary_state(opt);
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.secondary);
}

TEST(Oracles, Majorization) {
  MajorizationOptions opt;
  opt.trials = 30;
  opt.max_sites = 3;
  const OracleVerdict v = oracle_majorization(opt);
  EXPECT_TRUE(v.pass) << (v.witness ? v.witness->description : "");
  EXPECT_TRUE(v.secondary);
}

TEST(Oracles, MajorizationRejectsResetChannel) {
  MajorizationOptions opt;
  opt.trials = 10;
  opt.max_sites = 3;
  opt.reset_channel = true;
  const OracleVerdict v = oracle_majorization(opt);
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.witness.has_value());
}

TEST(Oracles, EntropyBounds) {
  std::vector<ProtocolReport> reports;
  for (int n : {1, 2, 3}) {
    ProtocolConfig cfg;
    cfg.probe_size = n;
    cfg.steps = 6;
    reports.push_back(run_protocol(cfg));
    cfg.gamma = 0.3;
    reports.push_back(run_protocol(cfg));
  }
  const OracleVerdict v = oracle_entropy_bounds(reports);
  EXPECT_TRUE(v.pass) << (v.witness ? v.witness->description : "");
  EXPECT_EQ(v.trials, 6);

  ProtocolConfig hot;
  hot.probe_size = 2;
  hot.steps = 2;
  hot.probe_betas = {0.1, 0.1};
  hot.enforce_cooler_probe = false;
  reports.push_back(run_protocol(hot));
  EXPECT_FALSE(oracle_entropy_bounds(reports).pass);
}

TEST(Oracles, MajorizesHelper) {
  RealVector pure(3), mixed(3), other(3);
  pure << 1.0, 0.0, 0.0;
  mixed << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  other << 0.2, 0.5, 0.3;
  bool strict = false;
  EXPECT_TRUE(majorizes(pure, mixed, 1e-12, &strict));
  EXPECT_TRUE(strict);
  EXPECT_FALSE(majorizes(mixed, pure, 1e-12));
  EXPECT_TRUE(majorizes(other, other, 1e-12, &strict));
  EXPECT_FALSE(strict);
  RealVector heavier(3);
  heavier << 0.5, 0.5, 0.5;
  EXPECT_FALSE(majorizes(heavier, mixed, 1e-12));
  EXPECT_THROW(majorizes(pure, RealVector(2), 1e-12), DomainError);
}

TEST(ChannelChecks, DephasingChannelIsUnitalAndConserving) {
  const SpinRegister reg = SpinRegister::probe(3);
  const LindbladGenerator gen(Hamiltonian::from_network(SpinNetwork::uniform_chain(3, 1.0)), 0.4);
  const Channel wait = [&](const QuantumState& s) { return evolve(s, gen, 0.8); };
  EXPECT_TRUE(is_unital(wait, reg).pass);
  const ChannelWitness z = conserves_z_excitation(wait, reg, 3);
  EXPECT_TRUE(z.pass);
  EXPECT_LT(z.deviation, 1e-9);
}

TEST(ChannelChecks, AmplitudeDampingIsNeither) {
  const SpinRegister reg({1});
  const Channel reset = [&](const QuantumState&) { return basis_state(reg, 1, Representation::Dense); };
  const ChannelWitness u = is_unital(reset, reg);
  EXPECT_FALSE(u.pass);
  EXPECT_NEAR(u.deviation, 0.5, 1e-15);
  const ChannelWitness z = conserves_z_excitation(reset, reg, 4);
  EXPECT_FALSE(z.pass);
  EXPECT_TRUE(z.counterexample.has_value());
  EXPECT_EQ(z.trial, 0);
}
