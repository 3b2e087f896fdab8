// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "iqa/annealer.hpp"
#include "iqa/commutator.hpp"
#include "iqa/spectra.hpp"

using namespace iqa;

static void BM_CommutatorSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FourierMatrix f{BasisDescriptor(n, n / 2)};
  for (auto _ : state) benchmark::DoNotOptimize(reference::commutator_matrix_serial(0.5, f));
}
BENCHMARK(BM_CommutatorSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_CommutatorParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FourierMatrix f{BasisDescriptor(n, n / 2)};
  for (auto _ : state) benchmark::DoNotOptimize(commutator_matrix(0.5, f));
}
BENCHMARK(BM_CommutatorParallel)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_FieldSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BasisDescriptor b(n, n / 2);
  const FourierMatrix f(b);
  const auto h = kitaev_couplings(0.3, b);
  for (auto _ : state) benchmark::DoNotOptimize(reference::field_of_serial(h, f));
}
BENCHMARK(BM_FieldSerial)->Arg(50)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_FieldParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BasisDescriptor b(n, n / 2);
  const FourierMatrix f(b);
  const auto h = kitaev_couplings(0.3, b);
  for (auto _ : state) benchmark::DoNotOptimize(field_of(h, f));
}
BENCHMARK(BM_FieldParallel)->Arg(50)->Arg(400)->Unit(benchmark::kMicrosecond);

static std::vector<RunSpec> batch() {
  std::vector<RunSpec> runs;
  for (int l = 1; l <= 8; ++l) runs.push_back({{40, l, 10.0, 11}, 500.0});
  return runs;
}

static void BM_AnnealBatchSerial(benchmark::State& state) {
  const auto runs = batch();
  for (auto _ : state) benchmark::DoNotOptimize(reference::anneal_batch_serial(runs));
}
BENCHMARK(BM_AnnealBatchSerial)->Unit(benchmark::kMillisecond);

static void BM_AnnealBatchParallel(benchmark::State& state) {
  const auto runs = batch();
  for (auto _ : state) benchmark::DoNotOptimize(anneal_batch(runs));
}
BENCHMARK(BM_AnnealBatchParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
