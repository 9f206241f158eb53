#include <benchmark/benchmark.h>

#include <random>

#include "spinfridge/channel_checks.hpp"
#include "spinfridge/evolution.hpp"
#include "spinfridge/protocol.hpp"

using namespace spinfridge;

namespace {

void generator_rhs(benchmark::State& state, bool blocked) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const SpinNetwork net = SpinNetwork::uniform_chain(n, 1.0);
  const LindbladGenerator gen(Hamiltonian::from_network(net), 0.5);
  const auto layout = blocked ? BasisLayout::sectors(n) : BasisLayout::full(n);
  const auto compiled = gen.compile(layout);
  QuantumState rho = random_state(net.reg(), rng, Representation::SectorBlocked);
  if (!blocked) rho = sector_recompose(rho);
  BlockMatrices out = rho.data();
  Matrix scratch;
  for (auto _ : state) {
    compiled->apply(rho.data(), out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_RhsDense(benchmark::State& state) { generator_rhs(state, false); }
void BM_RhsBlocked(benchmark::State& state) { generator_rhs(state, true); }

void BM_EvolveDephased(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladGenerator gen(Hamiltonian::from_network(SpinNetwork::uniform_chain(n, 1.0)), 0.5);
  const QuantumState rho = product_state({thermal_qubit(0.2, 1), thermal_product(kInfiniteBeta, n - 1, 2)});
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho, gen, 1.0));
}

void BM_EvolveSpectral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladGenerator gen(Hamiltonian::from_network(SpinNetwork::uniform_chain(n, 1.0)), 0.0);
  const QuantumState rho = product_state({thermal_qubit(0.2, 1), thermal_product(kInfiniteBeta, n - 1, 2)});
  evolve(rho, gen, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho, gen, 1.0));
}

void BM_OptimizeWaitingTime(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LindbladGenerator gen(Hamiltonian::from_network(SpinNetwork::uniform_chain(n, 1.0)), 0.0);
  const QuantumState rho = product_state({thermal_qubit(0.2, 1), thermal_product(kInfiniteBeta, n - 1, 2)});
  for (auto _ : state) benchmark::DoNotOptimize(optimize_waiting_time(rho, gen, 1.0, n));
}

void BM_IdealRun(benchmark::State& state) {
  ProtocolConfig cfg;
  cfg.probe_size = static_cast<int>(state.range(0));
  cfg.steps = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(cfg));
}

}  // namespace

BENCHMARK(BM_RhsDense)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsBlocked)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EvolveDephased)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvolveSpectral)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeWaitingTime)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IdealRun)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
