#include "rootflow/tracking.hpp"

#include "rootflow/errors.hpp"
#include "rootflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rootflow {
namespace {

double assignment_cost(const std::vector<Complex>& prev, const std::vector<Complex>& next, const std::vector<int>& perm) {
  double c = 0.0;
  for (std::size_t j = 0; j < perm.size(); ++j) c += std::abs(prev[j] - next[static_cast<std::size_t>(perm[j])]);
  return c;
}

// Hungarian algorithm (potentials, O(n^3)) on a dense cost matrix.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1)), v(static_cast<std::size_t>(n + 1));
  std::vector<int> p(static_cast<std::size_t>(n + 1)), way(static_cast<std::size_t>(n + 1));
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return perm;
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

MatchResult match_step(const std::vector<Complex>& prev, const std::vector<Complex>& next) {
  if (prev.size() != next.size()) throw PreconditionViolated("match_step: sizes differ");
  const std::size_t n = prev.size();
  MatchResult r;
  r.runner_up_gap = std::numeric_limits<double>::infinity();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n == 0) return r;
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) scale = std::max({scale, std::abs(prev[j]), std::abs(next[j])});
  // costs within this margin are treated as equal so rounding cannot break a tie
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300) * static_cast<double>(n);
  if (n <= 8) {
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    std::vector<double> row_min(n + 1, 0.0);  // row_min[j] = sum of row minima of rows j..n-1
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::abs(prev[i] - next[j]);
    for (std::size_t i = n; i-- > 0;) row_min[i] = row_min[i + 1] + *std::min_element(cost[i].begin(), cost[i].end());
    // Permutations in lexicographic order; a branch is cut when its bound cannot
    // undercut the runner-up, so best and runner-up match a full enumeration.
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::vector<int> best_perm = perm, cur(n);
    std::vector<bool> used(n, false);
    auto dfs = [&](auto&& self, std::size_t row, double partial) -> void {
      if (row == n) {
        if (partial < best - tie) {
          second = best;
          best = partial;
          best_perm = cur;
        } else if (partial < second && cur != best_perm) {
          second = partial;
        }
        return;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double c = partial + cost[row][j];
        if (c + row_min[row + 1] >= second) continue;
        used[j] = true;
        cur[row] = static_cast<int>(j);
        self(self, row + 1, c);
        used[j] = false;
      }
    };
    dfs(dfs, 0, 0.0);
    r.perm = best_perm;
    r.cost = best;
    r.runner_up_gap = second - best;
    return r;
  }
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::abs(prev[i] - next[j]);
  r.perm = hungarian(cost);
  r.cost = assignment_cost(prev, next, r.perm);
  return r;
}

RootPaths track_values(const std::vector<double>& grid, const std::vector<std::vector<Complex>>& values, double eps) {
  if (grid.size() != values.size()) throw PreconditionViolated("track: grid and samples differ in length");
  if (grid.empty()) throw PreconditionViolated("track: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw PreconditionViolated("track: grid must be strictly increasing");
  const std::size_t n = values.front().size();
  RootPaths out;
  out.grid = grid;
  out.paths.assign(n, std::vector<Complex>(grid.size()));
  std::vector<int> first(n);
  std::iota(first.begin(), first.end(), 0);
  std::stable_sort(first.begin(), first.end(), [&](int a, int b) {
    return lex_less(values.front()[static_cast<std::size_t>(a)], values.front()[static_cast<std::size_t>(b)]);
  });
  out.permutations.push_back(first);
  std::vector<Complex> prev(n);
  for (std::size_t j = 0; j < n; ++j) prev[j] = out.paths[j][0] = values.front()[static_cast<std::size_t>(first[j])];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (values[i].size() != n) throw PreconditionViolated("track: sample sizes differ");
    const auto m = match_step(prev, values[i]);
    double scale = 1.0;
    for (const auto& z : values[i]) scale = std::max(scale, std::abs(z));
    if (m.runner_up_gap < eps * scale) {
      out.ambiguous_steps.push_back(static_cast<int>(i));
    }
    out.permutations.push_back(m.perm);
    for (std::size_t j = 0; j < n; ++j) prev[j] = out.paths[j][i] = values[i][static_cast<std::size_t>(m.perm[j])];
  }
  if (!out.ambiguous_steps.empty())
    out.warnings.push_back("AmbiguousMatching: " + std::to_string(out.ambiguous_steps.size()) +
                           " step(s) with nearly tied assignments, first at grid index " +
                           std::to_string(out.ambiguous_steps.front()));
  return out;
}

RootPaths track(const std::vector<double>& grid, const std::vector<std::vector<Complex>>& coeffs, double eps) {
  std::vector<std::vector<Complex>> roots;
  roots.reserve(coeffs.size());
  for (const auto& a : coeffs) roots.push_back(roots_at(a));
  return track_values(grid, roots, eps);
}

RootPaths pullback_path(const RootPaths& p, int N, int sign) {
  if (N < 1) throw PreconditionViolated("pullback_path: N must be positive");
  if (sign != 1 && sign != -1) throw PreconditionViolated("pullback_path: sign must be +1 or -1");
  RootPaths out = p;
  for (auto& t : out.grid) {
    const double mag = std::pow(std::abs(t), N);
    const double s = (t < 0 && N % 2 == 1) ? -1.0 : 1.0;
    t = sign * s * mag;
  }
  const std::size_t M = out.grid.size();
  if (M >= 2 && out.grid.front() > out.grid.back()) {
    std::reverse(out.grid.begin(), out.grid.end());
    for (auto& path : out.paths) std::reverse(path.begin(), path.end());
    std::reverse(out.permutations.begin(), out.permutations.end());
    for (auto& s : out.ambiguous_steps) s = static_cast<int>(M) - 1 - s;
  }
  for (std::size_t i = 1; i < M; ++i)
    if (!(out.grid[i] > out.grid[i - 1]))
      throw PreconditionViolated("pullback_path: h-grid must lie on one side of 0");
  return out;
}

PathDiagnostics path_diagnostics(const RootPaths& p, int hoelder_n, std::vector<double> deltas) {
  PathDiagnostics d;
  const std::size_t M = p.grid.size();
  d.hoelder_n = hoelder_n > 0 ? hoelder_n : std::max(1, p.count());
  if (deltas.empty() && M >= 2) {
    const double len = p.grid.back() - p.grid.front();
    for (int k = 1; k <= 6; ++k) deltas.push_back(len * std::pow(10.0, -k));
  }
  std::vector<double> worst(deltas.size(), 0.0);
  for (const auto& path : p.paths) {
    double tv = 0.0;
    struct Cell {
      double len, inc;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 1; i < M; ++i) {
      const double dt = p.grid[i] - p.grid[i - 1];
      const double inc = std::abs(path[i] - path[i - 1]);
      tv += inc;
      d.lipschitz = std::max(d.lipschitz, inc / dt);
      d.hoelder = std::max(d.hoelder, inc / std::pow(dt, 1.0 / d.hoelder_n));
      cells.push_back({dt, inc});
    }
    d.total_variation.push_back(tv);
    d.displacement.push_back(M ? std::abs(path.back() - path.front()) : 0.0);
    // fractional knapsack: fastest cells first
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.inc * b.len > b.inc * a.len; });
    for (std::size_t q = 0; q < deltas.size(); ++q) {
      double room = deltas[q], sum = 0.0;
      for (const auto& c : cells) {
        if (room <= 0.0) break;
        if (c.len <= room) {
          sum += c.inc;
          room -= c.len;
        } else {
          sum += c.inc * room / c.len;
          room = 0.0;
        }
      }
      worst[q] = std::max(worst[q], sum);
    }
  }
  for (std::size_t q = 0; q < deltas.size(); ++q) d.ac_profile.push_back({deltas[q], worst[q]});
  return d;
}

double lp_difference_quotient_norm(const RootPaths& p, double exponent) {
  if (!(exponent >= 1.0)) throw PreconditionViolated("lp_difference_quotient_norm: exponent must be >= 1");
  double best = 0.0;
  for (const auto& path : p.paths) {
    double s = 0.0;
    for (std::size_t i = 1; i < p.grid.size(); ++i) {
      const double dt = p.grid[i] - p.grid[i - 1];
      s += std::pow(std::abs(path[i] - path[i - 1]) / dt, exponent) * dt;
    }
    best = std::max(best, std::pow(s, 1.0 / exponent));
  }
  return best;
}

std::vector<RefinementRow> convergence_table(const std::function<RootPaths(int)>& build, int base, int factor,
                                             int levels, const std::vector<double>& exponents) {
  std::vector<RefinementRow> rows;
  long points = base;
  for (int l = 0; l < levels; ++l) {
    RefinementRow row;
    row.points = static_cast<int>(points);
    const RootPaths paths = build(row.points);
    row.diagnostics = path_diagnostics(paths);
    for (double e : exponents) row.lp_norms.push_back(lp_difference_quotient_norm(paths, e));
    rows.push_back(std::move(row));
    points *= factor;
  }
  return rows;
}

double multiset_deviation(const RootPaths& p, const std::vector<std::vector<Complex>>& values) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    std::vector<Complex> at;
    for (const auto& path : p.paths) at.push_back(path[i]);
    const auto m = match_step(at, values[i]);
    for (std::size_t j = 0; j < at.size(); ++j)
      worst = std::max(worst, std::abs(at[j] - values[i][static_cast<std::size_t>(m.perm[j])]));
  }
  return worst;
}

std::vector<double> uniform_grid(double a, double b, int points) {
  if (points < 2) throw PreconditionViolated("uniform_grid: need at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (points - 1);
  g.back() = b;
  return g;
}

}  // namespace rootflow
