#include <mw/convexgeom.hpp>
#include <mw/rng.hpp>

#include <benchmark/benchmark.h>

namespace {

mw::Mat gaussian(int n, int k, std::uint64_t seed) {
  mw::CounterRng rng(seed);
  mw::Mat m(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = rng.normal();
  return m;
}

void BM_Hull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const mw::Mat pts = gaussian(n, static_cast<int>(state.range(1)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(mw::ConvexBody::from_points(pts));
}
BENCHMARK(BM_Hull)->Args({2, 1000})->Args({3, 1000})->Args({3, 20000})->Args({5, 60});

void BM_MinkowskiSegments(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const mw::Mat gens = gaussian(n, k, 12);
  std::vector<mw::ConvexBody> segs;
  for (int j = 0; j < k; ++j) segs.push_back(mw::ConvexBody::segment(gens.col(j)));
  for (auto _ : state) benchmark::DoNotOptimize(mw::minkowski_sum(segs));
}
BENCHMARK(BM_MinkowskiSegments)->Args({2, 200})->Args({3, 32})->Args({3, 64});

void BM_Khachiyan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const mw::ConvexBody k = mw::ConvexBody::from_points(gaussian(n, 4 * n, 13));
  for (auto _ : state) benchmark::DoNotOptimize(mw::loewner_fit(k, 1e-6));
}
BENCHMARK(BM_Khachiyan)->DenseRange(2, 6, 2);

void BM_Hausdorff(benchmark::State& state) {
  const mw::ConvexBody k = mw::ConvexBody::from_points(gaussian(3, 40, 14));
  const mw::ConvexBody l = mw::ConvexBody::from_points(gaussian(3, 40, 15));
  for (auto _ : state) benchmark::DoNotOptimize(mw::hausdorff(k, l));
}
BENCHMARK(BM_Hausdorff);

}  // namespace
