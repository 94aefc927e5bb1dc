#include <benchmark/benchmark.h>

#include "crt_records/discrete.hpp"
#include "crt_records/rng.hpp"

namespace {

void BM_SampleCayley(benchmark::State& state) {
  const auto n = static_cast<std::int64_t>(state.range(0));
  crt::RandomStream stream(42, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crt::sample_cayley(n, stream).root);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleCayley)->RangeMultiplier(8)->Range(125, 64000);

void BM_CutToRoot(benchmark::State& state) {
  const auto n = static_cast<std::int64_t>(state.range(0));
  crt::RandomStream stream(43, 0);
  const crt::DiscreteTree tree = crt::sample_cayley(n, stream);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crt::cut_to_root(tree, stream).cuts);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CutToRoot)->RangeMultiplier(8)->Range(125, 64000);

void BM_SampleBinary(benchmark::State& state) {
  const auto leaves = static_cast<std::int64_t>(state.range(0));
  crt::RandomStream stream(44, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crt::sample_binary(leaves, stream).root);
  }
  state.SetItemsProcessed(state.iterations() * leaves);
}
BENCHMARK(BM_SampleBinary)->RangeMultiplier(8)->Range(125, 64000);

}  // namespace
