// Serial reference vs OpenMP path for the hot kernels. Worker count follows
// ENSEMBLE_LAB_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "ensemble_lab/kernels/dense.hpp"
#include "ensemble_lab/macro/discretize.hpp"
#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/micro/wang_landau.hpp"
#include "ensemble_lab/model/profile.hpp"
#include "ensemble_lab/parallel.hpp"
#include "ensemble_lab/random.hpp"

using namespace ensemble_lab;

namespace {

Execution execution_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

ModelSpec vortex(int N) {
  ModelSpec m;
  m.domain = Domain::full_space(2);
  m.W = PairKernel::radial(profiles::log_repulsive());
  m.prior = PriorMeasure::gaussian(2, 1.0);
  m.N = N;
  return m;
}

void BM_SampleEnergies(benchmark::State& state) {
  const ModelSpec m = vortex(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sample_energies(m, 50000, 1, execution_of(state)));
  state.SetItemsProcessed(state.iterations() * 50000);
}
BENCHMARK(BM_SampleEnergies)->ArgsProduct({{0, 1}, {8, 32}})->ArgNames({"parallel", "N"})->Unit(benchmark::kMillisecond);

void BM_SymmetricMatvec(benchmark::State& state) {
  const Eigen::Index n = state.range(1);
  Rng rng = make_rng(2, 0);
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) A(i, j) = A(j, i) = g(rng);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n), y;
  for (auto _ : state) {
    kernels::symmetric_matvec(A, x, y, execution_of(state));
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_SymmetricMatvec)->ArgsProduct({{0, 1}, {512, 2048}})->ArgNames({"parallel", "n"});

void BM_RadialAssembly(benchmark::State& state) {
  const ModelSpec m = vortex(8);
  DiscretizationOptions o;
  o.resolution = static_cast<std::size_t>(state.range(1));
  o.execution = execution_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(discretize(m, DiscretizationMode::radial, o));
}
BENCHMARK(BM_RadialAssembly)->ArgsProduct({{0, 1}, {128, 512}})->ArgNames({"parallel", "shells"})->Unit(benchmark::kMillisecond);

// Replicas run on the worker pool; range(0) = 0 caps it at one worker.
void BM_WangLandau(benchmark::State& state) {
  const ModelSpec m = vortex(4);
  WangLandauParams p;
  p.bins = 16;
  p.replicas = 4;
  p.log_f_final = 1e-3;
  const int saved = worker_count();
  if (state.range(0) == 0) set_worker_count(1);
  for (auto _ : state) benchmark::DoNotOptimize(tail_logprob_dos(m, 0.0, 1.5, p, 3));
  set_worker_count(saved);
}
BENCHMARK(BM_WangLandau)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
