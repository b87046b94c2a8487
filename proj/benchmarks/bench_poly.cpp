#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "multider/derange.hpp"
#include "multider/exact_poly.hpp"
#include "multider/laguerre.hpp"

namespace {

using namespace multider;

std::vector<Integer> random_operand(std::size_t n, unsigned bits, std::uint64_t seed) {
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(static_cast<unsigned long>(seed));
  std::vector<Integer> v;
  for (std::size_t i = 0; i < n; ++i) {
    Integer z = gen.get_z_bits(bits);
    if (i % 3 == 0) z = -z;
    v.push_back(z);
  }
  return v;
}

void BM_Schoolbook(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_operand(n, 2000, 1);
  const auto b = random_operand(n, 2000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(detail::mul_schoolbook(a, b));
}
BENCHMARK(BM_Schoolbook)->RangeMultiplier(4)->Range(4, 1024);

void BM_Kronecker(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_operand(n, 2000, 1);
  const auto b = random_operand(n, 2000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(detail::mul_kronecker(a, b));
}
BENCHMARK(BM_Kronecker)->RangeMultiplier(4)->Range(4, 1024);

void BM_ProductTree(benchmark::State& state) {
  const std::vector<Poly> factors(static_cast<std::size_t>(state.range(0)), laguerre(4));
  for (auto _ : state) benchmark::DoNotOptimize(poly_product(factors));
}
BENCHMARK(BM_ProductTree)->Arg(13)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_FlatFold(benchmark::State& state) {
  const auto count = state.range(0);
  for (auto _ : state) {
    Poly acc{1};
    for (std::int64_t i = 0; i < count; ++i) acc = acc * laguerre(4);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_FlatFold)->Arg(13)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_UniformCount(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(uniform_count(n, 4));
}
BENCHMARK(BM_UniformCount)->Arg(13)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Deck(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(multiset_derangement(Multiset::uniform(13, 4)));
}
BENCHMARK(BM_Deck);

}  // namespace

BENCHMARK_MAIN();
