#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "cjgsvd/filter.hpp"
#include "cjgsvd/random.hpp"
#include "cjgsvd/solver.hpp"
#include "cjgsvd/sparse.hpp"
#include "cjgsvd/spd_backend.hpp"

namespace {

using namespace cjgsvd;

MatrixPair bench_pair(std::size_t n) {
  TestPairSpec spec;
  spec.kind = TestPairSpec::Kind::random;
  spec.n = n;
  spec.m1 = n + n / 5;
  spec.density = 0.02;
  spec.seed = 3;
  return gen_test_pair(spec);
}

void BM_PsiEval(benchmark::State& state) {
  const auto filter = make_filter(make_interval(0.3, 0.5), static_cast<std::size_t>(state.range(0)));
  double x = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi_eval(filter, x));
    x = x < 1.0 ? x + 1e-3 : -1.0;
  }
}
BENCHMARK(BM_PsiEval)->Arg(100)->Arg(1000);

void BM_Spmm(benchmark::State& state) {
  const auto pair = bench_pair(static_cast<std::size_t>(state.range(0)));
  const auto x = normal_block(pair.n(), 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(spmm(pair.a, x));
}
BENCHMARK(BM_Spmm)->Arg(1000)->Arg(4000);

void BM_ApplyP(benchmark::State& state) {
  const auto pair = bench_pair(400);
  BackendOptions opt;
  opt.mode = static_cast<SolveMode>(state.range(0));
  const auto backend = make_backend(pair, opt);
  const auto filter = make_filter(make_interval(0.3, 0.5), 20);
  const auto z = normal_block(pair.n(), 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_P(backend, filter, z));
}
BENCHMARK(BM_ApplyP)
    ->Arg(static_cast<int>(SolveMode::dense_cholesky))
    ->Arg(static_cast<int>(SolveMode::cg))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
