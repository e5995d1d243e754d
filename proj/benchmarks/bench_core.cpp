#include <benchmark/benchmark.h>

#include <random>

#include <menger/curvature.hpp>
#include <menger/flatness.hpp>
#include <menger/geometry.hpp>
#include <menger/grassmann.hpp>
#include <menger/shapes.hpp>

using namespace menger;

namespace {

std::vector<Point> random_vertices(int k, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Point> v;
  for (int i = 0; i <= k; ++i) {
    Point p(n);
    for (int j = 0; j < n; ++j) p(j) = gauss(rng);
    v.push_back(std::move(p));
  }
  return v;
}

void bm_simplex_volume(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  std::mt19937_64 rng(1);
  const Simplex s(random_vertices(k, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(simplex_volume(s));
}
BENCHMARK(bm_simplex_volume)->Args({2, 3})->Args({3, 8})->Args({5, 8});

void bm_grassmann_distance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Subspace u = Subspace::random(n, n / 2, 1);
  const Subspace v = Subspace::random(n, n / 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(grassmann_distance(u, v));
}
BENCHMARK(bm_grassmann_distance)->Arg(4)->Arg(8)->Arg(16);

WeightedCloud bench_circle(std::size_t n) {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Circle;
  spec.n_samples = n;
  return generate(spec);
}

void bm_beta_rotation(benchmark::State& state) {
  const WeightedCloud c = bench_circle(static_cast<std::size_t>(state.range(0)));
  const Point x = c.point(0);
  for (auto _ : state) benchmark::DoNotOptimize(beta(c, x, 0.2).beta);
}
BENCHMARK(bm_beta_rotation)->Arg(2000)->Arg(20000);

void bm_beta_multistart(benchmark::State& state) {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Sphere;
  spec.n_samples = static_cast<std::size_t>(state.range(0));
  const WeightedCloud c = generate(spec);
  const Point x = c.point(0);
  for (auto _ : state) benchmark::DoNotOptimize(beta(c, x, 0.5).beta);
}
BENCHMARK(bm_beta_multistart)->Arg(500)->Arg(2000);

void bm_sup_kappa(benchmark::State& state) {
  const WeightedCloud c = bench_circle(3000);
  InnerSearch search;
  search.exhaustive_threshold = 0;
  search.n_random = static_cast<std::size_t>(state.range(0));
  const std::vector<Point> fixed{c.point(7)};
  for (auto _ : state) benchmark::DoNotOptimize(sup_kappa(c, fixed, search, 1));
}
BENCHMARK(bm_sup_kappa)->Arg(256)->Arg(2048);

void bm_energy_mc(benchmark::State& state) {
  const WeightedCloud c = bench_circle(512);
  EnergyParams params{1, 3, 4.0};
  EnergyBudget budget;
  budget.mc_tuples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(energy(c, params, EnergyMode::MonteCarlo, budget, 5).value);
}
BENCHMARK(bm_energy_mc)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
