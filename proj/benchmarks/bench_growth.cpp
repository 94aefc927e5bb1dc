#include <benchmark/benchmark.h>

#include "crt_records/records.hpp"
#include "crt_records/rng.hpp"
#include "crt_records/tree.hpp"

namespace {

void BM_TreeGrowth(benchmark::State& state) {
  const auto n = static_cast<std::int64_t>(state.range(0));
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    crt::RandomStream stream(1234, replicate++);
    crt::Tree tree = crt::Tree::sample_initial(stream);
    while (static_cast<std::int64_t>(tree.branch_count()) < n) tree.grow(stream);
    benchmark::DoNotOptimize(tree.total_length());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TreeGrowth)->RangeMultiplier(4)->Range(256, 16384);

void BM_GrowthWithRecords(benchmark::State& state) {
  const auto n = static_cast<std::int64_t>(state.range(0));
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    crt::GrowthSimulation sim(1235, replicate++);
    sim.grow_to(n);
    benchmark::DoNotOptimize(sim.summary().record_count);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GrowthWithRecords)->RangeMultiplier(4)->Range(256, 16384);

void BM_LinearRecordSegment(benchmark::State& state) {
  crt::RandomStream stream(1236, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crt::linear_record_finite(stream, 2.0, 1.5).jump_count());
  }
}
BENCHMARK(BM_LinearRecordSegment);

void BM_UniformPointLookup(benchmark::State& state) {
  crt::RandomStream stream(1237, 0);
  crt::Tree tree = crt::Tree::sample_initial(stream);
  while (tree.branch_count() < 4096) tree.grow(stream);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.sample_uniform_point(stream).branch);
  }
}
BENCHMARK(BM_UniformPointLookup);

}  // namespace

BENCHMARK_MAIN();
