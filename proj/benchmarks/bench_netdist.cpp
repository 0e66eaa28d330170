#include <benchmark/benchmark.h>

#include "netdist/canonical.hpp"
#include "netdist/distances.hpp"
#include "netdist/random.hpp"
#include "netdist/rearrangement.hpp"

using namespace netdist;

namespace {

TaxaPtr numbered(int n) { return std::make_shared<const TaxaSet>(TaxaSet::numbered(n)); }

void BM_CanonicalKey(benchmark::State& state) {
  PhyloNetwork g = random_network(numbered(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_key(g));
}
BENCHMARK(BM_CanonicalKey)->Args({4, 0})->Args({4, 2})->Args({6, 3});

void BM_NeighborKeys(benchmark::State& state) {
  PhyloNetwork g = random_network(numbered(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(neighbor_keys(g, OpSet::PR));
}
BENCHMARK(BM_NeighborKeys)->Args({4, 0})->Args({4, 2});

void BM_AgreementDistance(benchmark::State& state) {
  TaxaPtr t = numbered(static_cast<int>(state.range(0)));
  int r = static_cast<int>(state.range(1));
  PhyloNetwork a = random_network(t, r, 2), b = random_network(t, r, 3);
  for (auto _ : state) benchmark::DoNotOptimize(agreement_distance(a, b).d);
}
BENCHMARK(BM_AgreementDistance)->Args({4, 1})->Args({5, 2})->Unit(benchmark::kMillisecond);

void BM_PrDistance(benchmark::State& state) {
  TaxaPtr t = numbered(static_cast<int>(state.range(0)));
  int r = static_cast<int>(state.range(1));
  PhyloNetwork a = random_network(t, r, 2), b = random_network(t, r, 3);
  for (auto _ : state) benchmark::DoNotOptimize(pr_distance(a, b).value);
}
BENCHMARK(BM_PrDistance)->Args({4, 1})->Args({4, 2})->Unit(benchmark::kMillisecond);

void BM_MagToPrSequence(benchmark::State& state) {
  TaxaPtr t = numbered(5);
  PhyloNetwork a = random_network(t, 2, 4), b = random_network(t, 1, 5);
  AgreementResult mag = agreement_distance(a, b);
  for (auto _ : state) benchmark::DoNotOptimize(mag_to_pr_sequence(a, b, mag).length());
}
BENCHMARK(BM_MagToPrSequence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
