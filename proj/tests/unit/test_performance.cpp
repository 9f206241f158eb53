#include <gtest/gtest.h>

#include <chrono>

#include "spinfridge/oracles.hpp"

using namespace spinfridge;

TEST(Performance, AlwaysCoolsFiveHundredTrialsUnderOneMinute) {
  const auto start = std::chrono::steady_clock::now();
  const OracleVerdict v = oracle_always_cools({});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.trials, 500);
  EXPECT_LT(seconds, 60.0);
  RecordProperty("seconds", std::to_string(seconds));
}

TEST(Performance, TenSiteIdealRunCompletes) {
  ProtocolConfig cfg;
  cfg.probe_size = 10;
  cfg.steps = 40;
  const auto start = std::chrono::steady_clock::now();
  const ProtocolReport r = run_protocol(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.steps.size(), 40u);
  EXPECT_LT(seconds, 120.0);
  RecordProperty("seconds", std::to_string(seconds));
}
