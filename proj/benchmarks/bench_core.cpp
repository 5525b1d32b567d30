#include <benchmark/benchmark.h>

#include "pairspec/empirical.hpp"
#include "pairspec/matalg.hpp"
#include "pairspec/predict.hpp"

using namespace pairspec;

namespace {

EnsembleParams params() { return {1.0, 1.0, 0.5, EnsembleKind::ComplexIndependent, 0.5}; }

void BM_SamplePair(benchmark::State& state) {
  const Dims dims(state.range(0), state.range(1));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto pair = sample_pair(params(), dims, seed++);
    benchmark::DoNotOptimize(pair.x.data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * dims.n() * dims.p());
}
BENCHMARK(BM_SamplePair)->Args({200, 400})->Args({1000, 2000})->Unit(benchmark::kMillisecond);

void BM_PseudoInverse(benchmark::State& state) {
  const auto pair = sample_pair(params(), Dims(state.range(0), state.range(1)), 7);
  for (auto _ : state) {
    auto r = pseudo_inverse(pair.y);
    benchmark::DoNotOptimize(r.pinv.data());
  }
}
BENCHMARK(BM_PseudoInverse)->Args({100, 50})->Args({200, 400})->Args({500, 1000})->Unit(benchmark::kMillisecond);

void BM_Eigenvalues(benchmark::State& state) {
  const auto n = state.range(0);
  const auto pair = sample_pair(params(), Dims(n, n), 11);
  const Eigen::MatrixXcd m = pair.x * pair.y.adjoint();
  for (auto _ : state) {
    auto e = eigenvalues(m);
    benchmark::DoNotOptimize(e.data());
  }
}
BENCHMARK(BM_Eigenvalues)->Arg(100)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto product = static_cast<ProductKind>(state.range(0));
  const auto pair = sample_pair(params(), Dims(200, 400), 13);
  for (auto _ : state) {
    auto s = spectrum(pair, product);
    benchmark::DoNotOptimize(s.eigs.data());
  }
}
BENCHMARK(BM_Spectrum)
    ->Arg(static_cast<int>(ProductKind::ConjTranspose))
    ->Arg(static_cast<int>(ProductKind::PseudoInverse))
    ->Unit(benchmark::kMillisecond);

void BM_InSupportViaTau(benchmark::State& state) {
  const auto p = params();
  double im = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(in_support_via_tau(p, 2.0, cplx(0.4, im)));
    im += 1e-6;
  }
}
BENCHMARK(BM_InSupportViaTau);

}  // namespace
BENCHMARK_MAIN();
