#include <benchmark/benchmark.h>

#include "multider/holonomic.hpp"

namespace {

using namespace multider;

void BM_GuessFixedK(benchmark::State& state) {
  const auto k = static_cast<unsigned>(state.range(0));
  const SequenceSlice seed = direct_uniform(Direction::fixed_k, k, 149);
  for (auto _ : state) benchmark::DoNotOptimize(guess_recurrence(seed));
}
BENCHMARK(BM_GuessFixedK)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_GuessFixedN(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const SequenceSlice seed = direct_uniform(Direction::fixed_n, n, 159);
  for (auto _ : state) benchmark::DoNotOptimize(guess_recurrence(seed));
}
BENCHMARK(BM_GuessFixedN)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_ExtendFixedK4(benchmark::State& state) {
  const auto upto = state.range(0);
  const auto ext = guess_and_extend_uniform(Direction::fixed_k, 4, 160, 159);
  for (auto _ : state) benchmark::DoNotOptimize(extend_sequence(ext.recurrence, ext.slice, upto));
}
BENCHMARK(BM_ExtendFixedK4)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
