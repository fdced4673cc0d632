#ifndef ROOTFLOW_TRACKING_HPP
#define ROOTFLOW_TRACKING_HPP

#include "rootflow/scalar.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rootflow {

// Continuous selection of n values along a parameter grid.
struct RootPaths {
  std::vector<double> grid;
  std::vector<std::vector<Complex>> paths;      // paths[j][i] = value of path j at grid[i]
  std::vector<std::vector<int>> permutations;   // permutations[i][j]: raw index at grid[i] taken by path j
  std::vector<int> ambiguous_steps;             // grid indices whose matching was nearly tied
  std::vector<std::string> warnings;

  int count() const { return static_cast<int>(paths.size()); }
  int points() const { return static_cast<int>(grid.size()); }
};

struct MatchResult {
  std::vector<int> perm;   // perm[j] = index into next matched with prev[j]
  double cost = 0.0;
  double runner_up_gap = 0.0;  // cost difference to the best distinct alternative (inf if none)
};

// Optimal assignment minimizing sum_j |prev_j - next_perm(j)|; ties go to the
// lexicographically smallest permutation. Exhaustive for n <= 8, Hungarian above.
MatchResult match_step(const std::vector<Complex>& prev, const std::vector<Complex>& next);

// Chains match_step over per-point value sets. Steps whose best and second best
// assignments differ by less than eps * scale are reported as ambiguous.
RootPaths track_values(const std::vector<double>& grid, const std::vector<std::vector<Complex>>& values,
                       double eps = kDefaultEps);

// Roots of the sampled curve z^n + sum_j (-1)^j a_j(t_i) z^{n-j} tracked along the grid.
RootPaths track(const std::vector<double>& grid, const std::vector<std::vector<Complex>>& coeffs,
                double eps = kDefaultEps);

// Reparameterizes paths given on an h-grid to t = sign * h^N, values unchanged.
RootPaths pullback_path(const RootPaths& p, int N, int sign);

struct AcPoint {
  double delta = 0.0;
  double worst = 0.0;  // largest sum of increments over disjoint cells of total length <= delta
};

struct PathDiagnostics {
  std::vector<double> total_variation;  // per path
  std::vector<double> displacement;     // |lambda(t_M) - lambda(t_0)| per path
  double lipschitz = 0.0;               // max difference quotient
  double hoelder = 0.0;                 // max |d lambda| / |dt|^{1/n}
  int hoelder_n = 1;
  std::vector<AcPoint> ac_profile;
};

// Diagnostics of the paths. hoelder_n = 0 uses the number of paths; an empty
// delta list uses (t_M - t_0) * 10^-k for k = 1..6.
PathDiagnostics path_diagnostics(const RootPaths& p, int hoelder_n = 0, std::vector<double> deltas = {});

// max over paths of (sum_i |d lambda / dt|^p dt)^{1/p}.
double lp_difference_quotient_norm(const RootPaths& p, double exponent);

struct RefinementRow {
  int points = 0;
  PathDiagnostics diagnostics;
  std::vector<double> lp_norms;  // one per requested exponent
};

// Diagnostics over successively refined grids: points = base * factor^level.
std::vector<RefinementRow> convergence_table(const std::function<RootPaths(int)>& build, int base, int factor,
                                             int levels, const std::vector<double>& exponents);

// Largest distance between the path values at grid[i] and the reference
// multisets, after optimal matching at each point.
double multiset_deviation(const RootPaths& p, const std::vector<std::vector<Complex>>& values);

// Uniform grid of `points` values from a to b inclusive.
std::vector<double> uniform_grid(double a, double b, int points);

}  // namespace rootflow

#endif  // ROOTFLOW_TRACKING_HPP
