#include "noshlab/mc.hpp"

#include <benchmark/benchmark.h>

#include <thread>

using namespace noshlab;

namespace {

constexpr std::size_t kReps = 200;

void BM_CellSerial(benchmark::State& state) {
  const auto entry = mc::ScenarioEntry::builtin(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::run_cell_serial(entry, n, ivest::EstimatorKind::Tsls4, kReps, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kReps));
}

void BM_CellParallel(benchmark::State& state) {
  const auto entry = mc::ScenarioEntry::builtin(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::run_cell(entry, n, ivest::EstimatorKind::Tsls4, kReps, 1, workers));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kReps));
}

void parallel_args(benchmark::internal::Benchmark* b) {
  const int cores = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  for (int n : {1000, 10000}) {
    for (int w = 1; w <= cores; w *= 2) b->Args({n, w});
    if ((cores & (cores - 1)) != 0) b->Args({n, cores});
  }
}

}  // namespace

BENCHMARK(BM_CellSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CellParallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
