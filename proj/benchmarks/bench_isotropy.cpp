#include <benchmark/benchmark.h>

#include "isotropy/kmeans.hpp"
#include "isotropy/spectral.hpp"
#include "isotropy/synth.hpp"
#include "isotropy/validation.hpp"
#include "isotropy/zmeasure.hpp"

using namespace isotropy;

namespace {

// Dimension sweep of the two I_c estimators on a 100-point Gaussian cluster.
void BM_IsotropyVec(benchmark::State& state) {
  const PointCloud cloud = gaussian_cluster(state.range(0), 100, 0.0, 1.0, 1);
  const auto view = ClusterView::whole(cloud);
  for (auto _ : state) benchmark::DoNotOptimize(isotropy_vec(view));
}
BENCHMARK(BM_IsotropyVec)->Arg(10)->Arg(100)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_IsotropyRnd(benchmark::State& state) {
  const PointCloud cloud = gaussian_cluster(state.range(0), 100, 0.0, 1.0, 1);
  const auto view = ClusterView::whole(cloud);
  for (auto _ : state) benchmark::DoNotOptimize(isotropy_rnd(view, state.range(1), 2));
}
BENCHMARK(BM_IsotropyRnd)
    ->ArgsProduct({{10, 100, 1000, 2000}, {100, 1000, 10000}})
    ->Unit(benchmark::kMillisecond);

void BM_ZPrime(benchmark::State& state) {
  const PointCloud cloud = gaussian_cluster(state.range(0), 1000, 0.0, 1.0, 3);
  const auto view = ClusterView::whole(cloud);
  const DirectionSet b = DirectionSet::random(state.range(0), 2, 4);
  const Vector a = b.vectors().row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(log_z_prime(view, a));
}
BENCHMARK(BM_ZPrime)->Arg(10)->Arg(100)->Arg(1000);

void BM_SpectralSummary(benchmark::State& state) {
  const PointCloud cloud = gaussian_cluster(state.range(0), 100, 0.0, 1.0, 5);
  const auto view = ClusterView::whole(cloud);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_summary(view, false));
}
BENCHMARK(BM_SpectralSummary)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const PointCloud cloud = gaussian_cluster(20, state.range(0), 0.0, 1.0, 6);
  KMeansOptions o;
  o.k = 10;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(cloud, o).inertia);
}
BENCHMARK(BM_KMeans)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Silhouette(benchmark::State& state) {
  const PointCloud cloud = gaussian_cluster(20, state.range(0), 0.0, 1.0, 7);
  std::vector<int> labels(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 5);
  const ClusterAssignment assign(labels);
  for (auto _ : state) benchmark::DoNotOptimize(silhouette(cloud, assign, static_cast<unsigned>(state.range(1))));
}
BENCHMARK(BM_Silhouette)->ArgsProduct({{1000, 4000}, {1, 4}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
