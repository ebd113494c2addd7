// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare
// thread counts; Serial rows ignore it.

#include <benchmark/benchmark.h>

#include <cmath>

#include "srq/protocol.hpp"
#include "srq/sweep.hpp"

namespace {

srq::Execution mode(const benchmark::State& state) {
  return state.range(0) ? srq::Execution::Parallel : srq::Execution::Serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_RunProtocol(benchmark::State& state) {
  srq::ProtocolConfig cfg;
  cfg.rounds = static_cast<std::uint64_t>(state.range(1));
  cfg.backend = static_cast<srq::Backend>(state.range(2));
  for (auto _ : state) {
    auto run = srq::run_protocol(cfg, mode(state));
    benchmark::DoNotOptimize(run.result.s_estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_RunProtocol)
    ->ArgsProduct({{0, 1}, {20000}, {0, 1, 2}})
    ->Unit(benchmark::kMillisecond);

void BM_EveBatch(benchmark::State& state) {
  const auto strategies = srq::random_strategies(static_cast<std::size_t>(state.range(1)), 1);
  const double beta = std::sqrt(3.0) / 2;
  for (auto _ : state) {
    auto v = srq::s_with_eve_batch(strategies, 0.5, beta, srq::ProjectorConvention::Operational,
                                   mode(state));
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_EveBatch)->ArgsProduct({{0, 1}, {10000}})->Unit(benchmark::kMillisecond);

void BM_BellSweep(benchmark::State& state) {
  const auto grid = srq::alpha_grid(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto rows = srq::bell_sweep(grid, srq::ProjectorConvention::Operational, mode(state));
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_BellSweep)->ArgsProduct({{0, 1}, {2001}})->Unit(benchmark::kMillisecond);

void BM_EveScan(benchmark::State& state) {
  srq::ProtocolConfig base;
  base.rounds = 5000;
  const auto family = srq::default_eve_family(8);
  for (auto _ : state) {
    auto rows = srq::eve_scan(family, base, true, mode(state));
    benchmark::DoNotOptimize(rows.data());
  }
  label(state);
}
BENCHMARK(BM_EveScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
