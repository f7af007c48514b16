// Microbenchmarks for the per-iteration kernels.

#include "gdaam/anderson.hpp"
#include "gdaam/gmres.hpp"
#include "gdaam/optimizers.hpp"

#include <benchmark/benchmark.h>

using namespace gdaam;

namespace {

BilinearGame game(Index n) { return rescale_to_unit_norm(make_random_bilinear(n, 1, 10.0)); }

void BM_MixerExtrapolate(benchmark::State& state) {
  const Index n = state.range(0);
  const int p = static_cast<int>(state.range(1));
  const Problem prob = game(n);
  const FixedPointMap map = fixed_point_map(prob, GdaScheme::kAlternating, 1.0);
  MixerConfig mc;
  mc.table_size = p;
  mc.mode = MixerMode::kSliding;
  AndersonMixer mixer(mc);
  Vector w = random_initial_point(n, n, 1).stacked();
  // Precomputed pairs keep the map cost out of the measurement.
  std::vector<Vector> ws{w};
  for (int i = 0; i < 64; ++i) ws.push_back(map.apply(ws.back()));
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t k = i++ % 63;
    benchmark::DoNotOptimize(mixer.extrapolate(ws[k], ws[k + 1]));
  }
}
BENCHMARK(BM_MixerExtrapolate)->Args({100, 10})->Args({1000, 10})->Args({1000, 50});

void BM_GdaStep(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem prob = game(n);
  const Vector w = random_initial_point(n, n, 1).stacked();
  const bool alt = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(alt ? stacked::alt_gda(prob, w, 1.0) : stacked::sim_gda(prob, w, 1.0));
  }
}
BENCHMARK(BM_GdaStep)->Args({100, 0})->Args({100, 1})->Args({1000, 0})->Args({1000, 1});

void BM_GmresCycle(benchmark::State& state) {
  const Index n = state.range(0);
  const int m = static_cast<int>(state.range(1));
  const Problem prob = game(n);
  const AffineFixedPointMap map = *fixed_point_map(prob, GdaScheme::kAlternating, 1.0).affine;
  const LinearOperator op = LinearOperator::from_matrix(Matrix::Identity(2 * n, 2 * n) - map.g);
  const Vector x0 = random_initial_point(n, n, 1).stacked();
  for (auto _ : state) benchmark::DoNotOptimize(gmres_cycle(op, map.offset, x0, m).solution);
}
BENCHMARK(BM_GmresCycle)->Args({100, 10})->Args({500, 10})->Args({500, 50});

void BM_DenseEigenvalues(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = make_random_bilinear(n, 2).a;
  for (auto _ : state) benchmark::DoNotOptimize(dense_eigenvalues(a).eigenvalues.data());
}
BENCHMARK(BM_DenseEigenvalues)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
