#include <benchmark/benchmark.h>

#include <random>

#include "orthoforms/borcherds_weyl.hpp"
#include "orthoforms/classifier.hpp"
#include "orthoforms/json_io.hpp"
#include "orthoforms/lattice.hpp"
#include "orthoforms/root_systems.hpp"
#include "orthoforms/series.hpp"

using namespace orthoforms;

namespace {

TruncatedSeries random_series(std::mt19937_64& rng, std::size_t rank, const Region& region,
                              int terms) {
  std::uniform_int_distribution<int> exp(0, 3), lc(-2, 2), coef(-9, 9);
  TruncatedSeries x = TruncatedSeries::constant(rank, region, 1);
  for (int i = 0; i < terms; ++i) {
    RatVector l(rank);
    for (auto& c : l) c = lc(rng);
    x.add_term(exp(rng), l, exp(rng), Rational(coef(rng), 1 + exp(rng)));
  }
  return x;
}

void BM_ShortVectors(benchmark::State& state) {
  const Lattice lat = builtin_lattice("E8");
  for (auto _ : state) benchmark::DoNotOptimize(short_vectors(lat, state.range(0)));
}
BENCHMARK(BM_ShortVectors)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DecomposeRoots(benchmark::State& state) {
  for (auto _ : state) {
    for (const char* name : {"D4", "E6", "E8", "4A1"})
      benchmark::DoNotOptimize(decompose(detect_roots(builtin_lattice(name), 4)));
  }
}
BENCHMARK(BM_DecomposeRoots)->Unit(benchmark::kMillisecond);

void BM_SolveWeightE8(benchmark::State& state) {
  const auto comp = model_component(RootType::kE8, 8, 1, {1});
  for (auto _ : state) {
    const QZeroData phi = assemble_phi(comp.lattice, {build_dual_set(comp)});
    benchmark::DoNotOptimize(weyl_vector(phi.with_weight(solve_weight(phi))));
  }
}
BENCHMARK(BM_SolveWeightE8)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(full_table());
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_SeriesMultiply(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Region r = Region::rect(state.range(0), state.range(0));
  const auto x = random_series(rng, 2, r, 40);
  const auto y = random_series(rng, 2, r, 40);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_SeriesMultiply)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_BorcherdsE8(benchmark::State& state) {
  const PhiData phi = load_phi("builtin:E8");
  const JacobiCoefficients f = full_coefficients(phi);
  const WeylVector w = weyl_vector(phi.layer);
  BorchOptions opt;
  opt.specialize = IntVector(8, 1);
  const long a = state.range(0);
  const Lattice e8 = builtin_lattice("E8");
  for (auto _ : state) benchmark::DoNotOptimize(borch_expand(f, w, e8, a, a, opt));
}
BENCHMARK(BM_BorcherdsE8)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_JacobianRank2(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Region r = Region::rect(4, 4);
  std::vector<WeightedSeries> forms;
  for (int k = 0; k < 5; ++k) forms.push_back({random_series(rng, 2, r, 6), 4 + 2 * k});
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(forms));
}
BENCHMARK(BM_JacobianRank2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
