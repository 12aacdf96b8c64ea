#include <random>

#include <benchmark/benchmark.h>

#include "wsn/numerics.hpp"

namespace {

wsn::SymMatrix random_spd(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> g;
  wsn::Matrix b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = g(rng);
  wsn::Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = i == j ? static_cast<double>(n) : 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b(i, k) * b(j, k);
      a(i, j) = s;
    }
  return wsn::SymMatrix(std::move(a));
}

void BM_MaxEigenvalue(benchmark::State& state) {
  const auto a = random_spd(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wsn::max_eigenvalue(a));
}
BENCHMARK(BM_MaxEigenvalue)->Arg(5)->Arg(10)->Arg(40);

void BM_SolveSpd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_spd(n);
  const wsn::RealVector b(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(wsn::solve_spd(a, b));
}
BENCHMARK(BM_SolveSpd)->Arg(5)->Arg(10)->Arg(40);

}  // namespace
