#include <benchmark/benchmark.h>

#include "rtpca/admm.hpp"
#include "rtpca/solver.hpp"
#include "rtpca/synth.hpp"
#include "rtpca/tlinalg.hpp"

using namespace rtpca;

namespace {

SynthInstance instance(std::size_t n, std::size_t n3, std::size_t rank) {
  SynthSpec spec;
  spec.dims = {n, n, n3};
  spec.rank = rank;
  return make_instance(spec);
}

void BM_Tprod(benchmark::State& state) {
  const auto n = std::size_t(state.range(0)), n3 = std::size_t(state.range(1));
  Rng rng(1);
  const Tensor3 a = Tensor3::random_normal({n, 5, n3}, rng);
  const Tensor3 b = Tensor3::random_normal({5, n, n3}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tprod(a, b));
}
BENCHMARK(BM_Tprod)->Args({100, 50})->Args({200, 50})->Unit(benchmark::kMillisecond);

void BM_Tsvd(benchmark::State& state) {
  const auto n = std::size_t(state.range(0)), n3 = std::size_t(state.range(1));
  Rng rng(2);
  const Tensor3 a = Tensor3::random_normal({n, n, n3}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tsvd(a, TsvdMode::skinny, 5));
}
BENCHMARK(BM_Tsvd)->Args({50, 10})->Args({100, 50})->Unit(benchmark::kMillisecond);

void BM_SgdStep(benchmark::State& state) {
  const auto rank = std::size_t(state.range(0));
  const SynthInstance inst = instance(100, 50, rank);
  const SgdConfig cfg = theorem_config(measure_stats(inst.low_rank.x_star, rank), 0.5, 1);
  const SgdState s0 = spectral_init(inst.y, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(sgd_step(s0, inst.y, cfg));
}
BENCHMARK(BM_SgdStep)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_AdmmStep(benchmark::State& state) {
  const SynthInstance inst = instance(100, 50, 5);
  AdmmConfig cfg;
  cfg.max_iters = 1;
  cfg.tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_tnn_admm(inst.y, cfg));
}
BENCHMARK(BM_AdmmStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
