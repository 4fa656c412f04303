#include <benchmark/benchmark.h>

#include <random>

#include "picard/picard.hpp"
#include "picard/problem.hpp"

using namespace picard;

namespace {

TruncatedSeries dense_series(const SeriesSpace& space, int order, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 16);
  TruncatedSeries s(space, order);
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b) s.add_term({a, b}, make_rational(num(rng), den(rng)));
  return s;
}

void BM_SeriesMultiply(benchmark::State& state) {
  std::mt19937_64 rng(7);
  SeriesSpace space(1, {Rational(0)});
  const int order = static_cast<int>(state.range(0));
  TruncatedSeries a = dense_series(space, order, rng), b = dense_series(space, order, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMultiply)->Arg(4)->Arg(8)->Arg(16);

void BM_Volterra(benchmark::State& state) {
  std::mt19937_64 rng(11);
  SeriesSpace space(1, {Rational(0)});
  TruncatedSeries a = dense_series(space, 16, rng);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(volterra_integrate(a, n));
}
BENCHMARK(BM_Volterra)->Arg(1)->Arg(3);

ProblemSpec tanh_problem() {
  ProblemDefinition d;
  d.n = 1;
  d.k = 1;
  d.m = 1;
  d.F = "x^2 - 1/4*u_x^2";
  d.initial = {"0"};
  d.omega = {Interval(Rational(-1), Rational(1))};
  d.x0 = {Rational(0)};
  return build_problem(d);
}

void BM_IterateTanhProblem(benchmark::State& state) {
  ProblemSpec spec = tanh_problem();
  IterationOptions opts;
  opts.order = static_cast<int>(state.range(0));
  opts.max_iters = 4;
  for (auto _ : state) benchmark::DoNotOptimize(iterate(spec, opts));
}
BENCHMARK(BM_IterateTanhProblem)->Arg(9)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
