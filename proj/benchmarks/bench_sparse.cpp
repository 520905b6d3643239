#include <mw/muckenhoupt.hpp>
#include <mw/sparse.hpp>

#include <benchmark/benchmark.h>

namespace {

void BM_SparseDominate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const mw::DyadicGrid grid(1, static_cast<int>(state.range(1)));
  mw::CounterRng rng(21);
  const mw::ConvexField f = mw::random_convex_field(grid, n, 2, 0.1, rng);
  const mw::CubeCollection fam = mw::all_cubes(grid, 0, grid.depth());
  for (auto _ : state) {
    const mw::ConvexField fresh(grid, n, f.bodies());
    benchmark::DoNotOptimize(mw::sparse_dominate(fresh, fam));
  }
}
BENCHMARK(BM_SparseDominate)->Args({2, 5})->Args({3, 4});

void BM_Maximal(benchmark::State& state) {
  const mw::DyadicGrid grid(2, static_cast<int>(state.range(0)));
  mw::CounterRng rng(22);
  const mw::ConvexField f = mw::random_convex_field(grid, 2, 2, 0.1, rng);
  const mw::CubeCollection all = mw::all_cubes(grid, 0, grid.depth());
  for (auto _ : state) {
    const mw::ConvexField fresh(grid, 2, f.bodies());
    benchmark::DoNotOptimize(mw::maximal(fresh, all));
  }
}
BENCHMARK(BM_Maximal)->Arg(2)->Arg(3);

void BM_ApConstant(benchmark::State& state) {
  const mw::DyadicGrid grid(1, 4);
  mw::WeightSpec spec;
  spec.kind = mw::WeightSpec::Kind::Random;
  spec.n = static_cast<int>(state.range(0));
  spec.seed = 23;
  const mw::LpWSpace s{state.range(1) / 2.0, mw::make_weight(spec, grid)};
  const mw::CubeCollection all = mw::all_cubes(grid, 0, grid.depth());
  for (auto _ : state) benchmark::DoNotOptimize(mw::ap_constant(s, all));
}
BENCHMARK(BM_ApConstant)->Args({2, 4})->Args({2, 6})->Args({3, 6});

}  // namespace
