#include "support.hpp"

#include <cmath>
#include <numeric>

using namespace rootflow;
using namespace rootflow::testing;

namespace {

// Samples of a_1..a_n for z^n - t.
std::vector<std::vector<Complex>> binomial_samples(int n, const std::vector<double>& grid) {
  std::vector<std::vector<Complex>> out;
  for (double t : grid) {
    std::vector<Complex> a(static_cast<std::size_t>(n), 0.0);
    a.back() = (n % 2 == 0 ? -1.0 : 1.0) * t;
    out.push_back(a);
  }
  return out;
}

// Sum of |c_j| gamma^(n-j) for gamma bounding both root sets.
double coefficient_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  const int n = static_cast<int>(a.size());
  double gamma = 0.0;
  for (int j = 1; j <= n; ++j)
    gamma = std::max({gamma, std::pow(std::abs(a[static_cast<std::size_t>(j - 1)]), 1.0 / j),
                      std::pow(std::abs(b[static_cast<std::size_t>(j - 1)]), 1.0 / j)});
  gamma *= 2.0;
  double s = 0.0;
  for (int j = 1; j <= n; ++j) s += std::abs(a[static_cast<std::size_t>(j - 1)] - b[static_cast<std::size_t>(j - 1)]) * std::pow(gamma, n - j);
  return s;
}

}  // namespace

TEST_CASE("roots_at examples") {
  CHECK(same_multiset(roots_at({0.0, -1.0}), {1.0, -1.0}, 1e-14));
  CHECK(same_multiset(roots_at({3.0, 2.0}), {1.0, 2.0}, 1e-14));
  CHECK(same_multiset(roots_at({0.0, 0.0, 1.0}), {1.0, std::polar(1.0, 2 * M_PI / 3), std::polar(1.0, -2 * M_PI / 3)}, 1e-12));
  CHECK(same_multiset(roots_at({0.0, 1.0}), {Complex(0, 1), Complex(0, -1)}, 1e-14));
}

TEST_CASE("match_step examples") {
  const auto swap = match_step({0.0, 1.0}, {1.0, 0.0});
  CHECK(swap.perm == std::vector<int>{1, 0});
  CHECK(swap.cost == 0.0);
  const auto id = match_step({0.0, 1.0}, {0.1, 0.9});
  CHECK(id.perm == std::vector<int>{0, 1});
  CHECK(id.cost == doctest::Approx(0.2));
  // every assignment costs 2 sqrt 2: ties go to the smallest permutation
  const auto tie = match_step({1.0, -1.0}, {Complex(0, 1), Complex(0, -1)});
  CHECK(tie.perm == std::vector<int>{0, 1});
  CHECK(tie.runner_up_gap == doctest::Approx(0.0));
  CHECK_THROWS_AS(match_step({0.0}, {0.0, 1.0}), PreconditionViolated);
}

TEST_CASE("match_step equals full enumeration, ties included") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rand_int(1, 6));
    std::vector<Complex> prev, next;
    // coarse integer lattice so that equal costs are common
    for (int j = 0; j < n; ++j) {
      prev.push_back(Complex(static_cast<double>(rand_int(-1, 1)), static_cast<double>(rand_int(-1, 1))));
      next.push_back(Complex(static_cast<double>(rand_int(-1, 1)), static_cast<double>(rand_int(-1, 1))));
    }
    std::vector<int> perm(static_cast<std::size_t>(n)), best_perm;
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += std::abs(prev[static_cast<std::size_t>(j)] - next[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
      if (c < best - 1e-12) {
        best = c;
        best_perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto m = match_step(prev, next);
    CHECK(m.perm == best_perm);
    CHECK(m.cost == doctest::Approx(best));
  }
}

TEST_CASE("match_step agrees between exhaustive and Hungarian search") {
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> prev, next;
    for (int j = 0; j < 10; ++j) {
      prev.push_back(rand_complex());
      next.push_back(prev.back() + 0.05 * rand_complex());
    }
    const auto big = match_step(prev, next);
    std::vector<Complex> p8(prev.begin(), prev.begin() + 8), n8(next.begin(), next.begin() + 8);
    const auto small = match_step(p8, n8);
    double c = 0.0;
    for (int j = 0; j < 10; ++j) c += std::abs(prev[static_cast<std::size_t>(j)] - next[static_cast<std::size_t>(big.perm[static_cast<std::size_t>(j)])]);
    CHECK(big.cost == doctest::Approx(c));
    CHECK(small.cost <= big.cost + 1e-12);
  }
}

TEST_CASE("track z^2 - t on [0, 1]") {
  const auto grid = uniform_grid(0.0, 1.0, 1001);
  const auto paths = track(grid, binomial_samples(2, grid));
  REQUIRE(paths.count() == 2);
  CHECK(multiset_deviation(paths, [&] {
          std::vector<std::vector<Complex>> v;
          for (double t : grid) v.push_back({std::sqrt(t), -std::sqrt(t)});
          return v;
        }()) <= 1e-12);
  const auto d = path_diagnostics(paths);
  for (double tv : d.total_variation) CHECK(tv == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.hoelder_n == 2);
  CHECK(d.hoelder == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.lipschitz > 10.0);
}

TEST_CASE("track z^2 - t on [-1, 1]") {
  const auto grid = uniform_grid(-1.0, 1.0, 2001);
  const auto paths = track(grid, binomial_samples(2, grid));
  const auto d = path_diagnostics(paths);
  for (double tv : d.total_variation) CHECK(tv == doctest::Approx(2.0).epsilon(1e-9));
  // each path starts on the imaginary axis and ends on the real one
  for (const auto& path : paths.paths) {
    CHECK(std::abs(path.front().real()) < 1e-12);
    CHECK(std::abs(std::abs(path.back()) - 1.0) < 1e-12);
  }
}

TEST_CASE("constant curve has zero variation") {
  const auto grid = uniform_grid(0.0, 1.0, 51);
  std::vector<std::vector<Complex>> coeffs(grid.size(), {3.0, 2.0});
  const auto d = path_diagnostics(track(grid, coeffs));
  for (double tv : d.total_variation) CHECK(tv <= 1e-14);
  CHECK(d.lipschitz <= 1e-12);
}

TEST_CASE("ambiguous steps are reported") {
  const std::vector<double> grid = {0.0, 1.0};
  const auto p = track_values(grid, {{1.0, -1.0}, {Complex(0, 1), Complex(0, -1)}});
  CHECK(p.ambiguous_steps == std::vector<int>{1});
  CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("pullback examples") {
  const auto h = uniform_grid(0.0, 1.0, 101);
  std::vector<std::vector<Complex>> values;
  for (double x : h) values.push_back({x, -x});
  const auto paths = track_values(h, values);
  const auto plus = pullback_path(paths, 2, 1);
  for (std::size_t i = 0; i < plus.grid.size(); ++i) {
    CHECK(plus.grid[i] == doctest::Approx(h[i] * h[i]));
    CHECK(std::abs(plus.paths[0][i] - std::sqrt(plus.grid[i])) <= 1e-15);
  }
  const auto minus = pullback_path(paths, 2, -1);
  CHECK(minus.grid.front() == -1.0);
  CHECK(minus.grid.back() == 0.0);
  CHECK(std::abs(minus.paths[0].front() - 1.0) <= 1e-15);
  CHECK_THROWS_AS(pullback_path(track_values(uniform_grid(-1, 1, 5), std::vector<std::vector<Complex>>(5, {0.0})), 2, 1),
                  PreconditionViolated);
  CHECK_THROWS_AS(pullback_path(paths, 0, 1), PreconditionViolated);
}

TEST_CASE("path_diagnostics examples") {
  RootPaths p;
  p.grid = {0.0, 0.5, 1.0};
  p.paths = {{0.0, 1.0, 1.0}};
  const auto d = path_diagnostics(p, 1, {0.25, 1.0});
  CHECK(d.total_variation[0] == 1.0);
  CHECK(d.displacement[0] == 1.0);
  CHECK(d.lipschitz == 2.0);
  CHECK(d.ac_profile[0].worst == doctest::Approx(0.5));
  CHECK(d.ac_profile[1].worst == doctest::Approx(1.0));
}

TEST_CASE("root paths have bounded total variation") {
  // the variation of each path is bounded by the sum of the variations of
  // a_j^(1/j) up to a constant depending on n
  for (int trial = 0; trial < 10; ++trial) {
    const int n = static_cast<int>(rand_int(2, 4));
    std::vector<Complex> c0, c1;
    for (int j = 0; j < n; ++j) {
      c0.push_back(rand_complex());
      c1.push_back(rand_complex());
    }
    const auto grid = uniform_grid(-1.0, 1.0, 2001);
    std::vector<std::vector<Complex>> coeffs;
    for (double t : grid) {
      std::vector<Complex> a;
      for (int j = 0; j < n; ++j) a.push_back(c0[static_cast<std::size_t>(j)] + t * c1[static_cast<std::size_t>(j)]);
      coeffs.push_back(a);
    }
    const auto d = path_diagnostics(track(grid, coeffs));
    double bound = 0.0;
    for (int j = 0; j < n; ++j) bound += 2.0 * std::pow(2.0 * std::abs(c1[static_cast<std::size_t>(j)]), 1.0 / (j + 1)) * std::pow(2.0, 1.0 - 1.0 / (j + 1));
    for (double tv : d.total_variation) CHECK(tv <= 16.0 * n * bound + 1e-9);
  }
}

TEST_CASE("absolute continuity profile of sqrt t") {
  const auto grid = uniform_grid(0.0, 1.0, 100001);
  const auto d = path_diagnostics(track(grid, binomial_samples(2, grid)), 2, {1e-2, 2.5e-3});
  CHECK(d.ac_profile[0].worst == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(d.ac_profile[1].worst / d.ac_profile[0].worst == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("roots move by at most a root of the coefficient change") {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rand_int(2, 5));
    std::vector<Complex> a, b;
    for (int j = 0; j < n; ++j) {
      a.push_back(rand_complex());
      b.push_back(a.back() + std::pow(10.0, -rand_int(1, 8)) * rand_complex());
    }
    const auto ra = roots_at(a), rb = roots_at(b);
    const auto m = match_step(ra, rb);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(ra[static_cast<std::size_t>(j)] - rb[static_cast<std::size_t>(m.perm[static_cast<std::size_t>(j)])]));
    CHECK(worst <= 4.0 * std::pow(coefficient_distance(a, b), 1.0 / n) + 1e-12);
  }
}

TEST_CASE("L^p norms of difference quotients for z^3 - t") {
  auto build = [](int points) {
    const auto grid = uniform_grid(0.0, 1.0, points);
    return track(grid, binomial_samples(3, grid));
  };
  const auto table = convergence_table(build, 101, 10, 3, {1.0, 1.5, 2.0});
  REQUIRE(table.size() == 3);
  for (const auto& row : table) CHECK(row.lp_norms[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t q = 1; q < 3; ++q)
    for (std::size_t level = 1; level < table.size(); ++level)
      CHECK(table[level].lp_norms[q] > table[level - 1].lp_norms[q]);
  // p = 2 diverges like M^(1/6)
  CHECK(table[2].lp_norms[2] / table[1].lp_norms[2] > 1.3);
}

TEST_CASE("uniform_grid") {
  const auto g = uniform_grid(-1.0, 1.0, 5);
  CHECK(g == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), PreconditionViolated);
}
