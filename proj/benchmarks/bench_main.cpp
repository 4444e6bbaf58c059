#include <benchmark/benchmark.h>

#include "obsblr/obsblr.hpp"

namespace {

void BM_BurstLossRate(benchmark::State& state) {
  const obsblr::SwitchParams p(static_cast<int>(state.range(0)), 100, 0.3, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(obsblr::burst_loss_rate(p));
}
BENCHMARK(BM_BurstLossRate)->Arg(5)->Arg(20)->Arg(64)->Arg(128);

void BM_ClassBlr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const obsblr::QosParams q(n, n / 2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(obsblr::class_blr(q, 100, 0.5, 0.3));
}
BENCHMARK(BM_ClassBlr)->Arg(4)->Arg(16)->Arg(32);

void BM_Simulate(benchmark::State& state) {
  obsblr::SimConfig cfg{obsblr::SwitchParams(20, 100, 0.1, 0.01)};
  cfg.horizon = static_cast<std::uint64_t>(state.range(0));
  cfg.warmup = obsblr::SimConfig::default_warmup(cfg.horizon);
  cfg.replications = 1;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(obsblr::simulate(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
