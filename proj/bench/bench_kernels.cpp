// Serial vs OpenMP comparison for the hot kernels: per-project medians,
// feasibility sums / full aggregation, and the worst-case search.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "phantom/engine.hpp"
#include "phantom/search.hpp"
#include "phantom/systems.hpp"

using namespace phantom;

namespace {

Profile synthetic_profile(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  std::vector<Division> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> s(m);
    double sum = 0.0;
    for (double& x : s) {
      x = exp1(rng);
      sum += x;
    }
    for (double& x : s) x /= sum;
    rows.emplace_back(std::move(s));
  }
  return Profile(std::move(rows));
}

void bm_medians_serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const Profile v = synthetic_profile(n, m, 1);
  const auto y = piecewise_uniform_system(static_cast<int>(n));
  std::vector<double> phantoms(n + 1), medians(m);
  y.values(0.7, phantoms);
  for (auto _ : state) {
    column_medians_serial(v, phantoms, medians);
    benchmark::DoNotOptimize(medians.data());
    benchmark::ClobberMemory();
  }
}

void bm_medians_parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const Profile v = synthetic_profile(n, m, 1);
  const auto y = piecewise_uniform_system(static_cast<int>(n));
  std::vector<double> phantoms(n + 1), medians(m);
  y.values(0.7, phantoms);
  for (auto _ : state) {
    column_medians_parallel(v, phantoms, medians);
    benchmark::DoNotOptimize(medians.data());
    benchmark::ClobberMemory();
  }
}

void bm_aggregate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const Profile v = synthetic_profile(n, m, 2);
  const auto y = independent_markets_system(static_cast<int>(n));
  for (auto _ : state) {
    auto res = aggregate(v, y);
    benchmark::DoNotOptimize(res.tstar);
  }
}

void bm_search(benchmark::State& state) {
  const auto budget = static_cast<long long>(state.range(0));
  for (auto _ : state) {
    auto out = search_max_loss("pu", budget, 42);
    benchmark::DoNotOptimize(out.best_relaxed);
  }
}

}  // namespace

BENCHMARK(bm_medians_serial)->Args({1000, 1000})->Args({200000, 3});
BENCHMARK(bm_medians_parallel)->Args({1000, 1000})->Args({200000, 3});
BENCHMARK(bm_aggregate)->Args({1000, 1000})->Args({200000, 3});
BENCHMARK(bm_search)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
