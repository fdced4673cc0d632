#include "rootflow/rootflow.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace rootflow;

namespace {

FloatJet random_jet(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FloatJet f(K);
  for (int m = 0; m <= K; ++m) f[m] = Complex(u(rng), u(rng));
  return f;
}

// z^n - t
template <class F>
PolyCurve<F> binomial(int n, int K) {
  std::vector<Jet<F>> s(static_cast<std::size_t>(n), Jet<F>(K));
  s.back() = -Jet<F>::monomial(F(1), 1, K);
  return PolyCurve<F>::from_standard(s);
}

}  // namespace

static void BM_JetMultiplyFloat(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int K = static_cast<int>(state.range(0));
  const FloatJet a = random_jet(rng, K), b = random_jet(rng, K);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiplyFloat)->Arg(8)->Arg(32)->Arg(128);

static void BM_JetMultiplyExact(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  ExactJet a(K), b(K);
  for (int m = 0; m <= K; ++m) {
    a[m] = Cyclo::gaussian(mpq_class(m + 1, 3), mpq_class(1, m + 2));
    b[m] = Cyclo::root_of_unity(m % 120);
  }
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiplyExact)->Arg(4)->Arg(16);

static void BM_BezoutiantFloat(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int n = static_cast<int>(state.range(0));
  std::vector<FloatJet> roots;
  for (int i = 0; i < n; ++i) roots.push_back(random_jet(rng, 16));
  const auto p = FloatCurve::from_roots(roots);
  for (auto _ : state) benchmark::DoNotOptimize(bezoutiant(p));
}
BENCHMARK(BM_BezoutiantFloat)->DenseRange(2, 8, 2);

static void BM_DesingularizeExact(benchmark::State& state) {
  const auto p = binomial<Cyclo>(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(desingularize(p));
}
BENCHMARK(BM_DesingularizeExact)->DenseRange(2, 5);

static void BM_DesingularizeFloat(benchmark::State& state) {
  const auto p = binomial<Complex>(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(desingularize(p));
}
BENCHMARK(BM_DesingularizeFloat)->DenseRange(2, 6, 2);

static void BM_Track(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const auto grid = uniform_grid(-1.0, 1.0, points);
  std::vector<std::vector<Complex>> coeffs;
  for (double t : grid) coeffs.push_back({0.0, t, 0.0, -t * t});
  for (auto _ : state) benchmark::DoNotOptimize(track(grid, coeffs));
  state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK(BM_Track)->Arg(1000)->Arg(10000);

static void BM_MatchStep(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = static_cast<int>(state.range(0));
  std::vector<Complex> prev, next;
  for (int j = 0; j < n; ++j) {
    prev.push_back({u(rng), u(rng)});
    next.push_back(prev.back() + 0.01 * Complex(u(rng), u(rng)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(match_step(prev, next));
}
BENCHMARK(BM_MatchStep)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
