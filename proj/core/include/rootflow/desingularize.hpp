#ifndef ROOTFLOW_DESINGULARIZE_HPP
#define ROOTFLOW_DESINGULARIZE_HPP

#include "rootflow/polycurve.hpp"
#include "rootflow/roots.hpp"
#include "rootflow/tracking.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rootflow {

struct TraceStep {
  enum class Kind { ImplicitLift, Split, ShiftScale };
  Kind kind = Kind::ImplicitLift;
  int depth = 0;
  int degree = 0;
  // ShiftScale: m = min m(a_k)/k, d = ceil(1/m), m_tilde = d m - 1
  mpq_class m = 0;
  int d = 1;
  mpq_class m_tilde = 0;
  // Split: degrees of the two factors and the gap between their root clusters
  int degree1 = 0;
  int degree2 = 0;
  double gap = 0.0;
  std::string note;
};

const char* to_string(TraceStep::Kind k);

template <class F>
struct DesingularizationResult {
  int N = 1;
  int branch = 1;
  std::vector<Jet<F>> roots;  // roots of h -> P(t0 + branch * h^N)
  std::vector<TraceStep> trace;
};

template <class F>
struct SplitPair {
  PolyCurve<F> p1;
  PolyCurve<F> p2;
  double gap = 0.0;  // distance between the root clusters of P1(0) and P2(0)
};

// Root jet through the simple root z0 of P(0), by Newton iteration on jets.
template <class F>
Jet<F> implicit_lift(const PolyCurve<F>& p, const F& z0, const Tolerances& tol = {});

// Hensel factorization P = P1 * P2 where P1(0) collects the roots of P(0)
// listed in `first` and P2(0) the others.
template <class F>
SplitPair<F> split_roots(const PolyCurve<F>& p, const std::vector<F>& first, const std::vector<F>& second,
                         const Tolerances& tol = {});

// Splits off the first root cluster of P(0). Throws NoSplit with one cluster.
template <class F>
SplitPair<F> split(const PolyCurve<F>& p, const Tolerances& tol = {});

template <class F>
struct Tschirnhaus {
  PolyCurve<F> reduced;  // Q(z) = P(z + a_1/n), a_1(Q) = 0
  Jet<F> shift;          // a_1 / n
};

template <class F>
Tschirnhaus<F> tschirnhaus_reduce(const PolyCurve<F>& p, const Tolerances& tol = {});

template <class F>
struct ScaleReduction {
  mpq_class m;
  int d = 1;
  PolyCurve<F> plus;   // coefficients a_k(+h^d) / h^k
  PolyCurve<F> minus;  // coefficients a_k(-h^d) / h^k
};

// Requires a_1 = 0 and all roots of P(0) equal to zero.
template <class F>
ScaleReduction<F> scale_reduce(const PolyCurve<F>& p, const Tolerances& tol = {});

// min over k >= 2 of m(a_k)/k; nullopt when every a_k is identically zero.
// Throws FlatCoefficient when a vanishing jet of unknown tail blocks the decision.
template <class F>
std::optional<mpq_class> min_scaled_order(const PolyCurve<F>& p, const Tolerances& tol = {});

template <class F>
struct DesingularizationPair {
  DesingularizationResult<F> plus;
  DesingularizationResult<F> minus;
};

template <class F>
DesingularizationPair<F> desingularize(const PolyCurve<F>& p, const Tolerances& tol = {});

// One branch: roots of h -> P(t0 + sign * h^N).
template <class F>
DesingularizationResult<F> desingularize_branch(const PolyCurve<F>& p, int sign, const Tolerances& tol = {});

// P(t0 + branch h^N) evaluated at each root jet.
template <class F>
std::vector<Jet<F>> residual(const PolyCurve<F>& p, const DesingularizationResult<F>& r);

// Factors of P, one per distinct root of P(0), by repeated splitting.
template <class F>
std::vector<PolyCurve<F>> cluster_factors(const PolyCurve<F>& p, const Tolerances& tol = {});

struct DifferentiabilityEntry {
  int factor = 0;    // index into cluster factors
  int k = 0;
  int order = 0;     // vanishing order of Delta_k, or K+1 when only bounded below
  bool bounded_below = false;
  bool infinite = false;
  int required = 0;  // k (k - 1)
  bool ok = false;
};

struct DifferentiabilityReport {
  bool ok = true;
  std::vector<int> factor_degrees;
  std::vector<DifferentiabilityEntry> entries;
  std::optional<DifferentiabilityEntry> failure;
};

// Local differentiability test: m(Delta_k(P_i)) >= k (k - 1) for every cluster
// factor P_i and 2 <= k <= deg P_i.
template <class F>
DifferentiabilityReport differentiable_test(const PolyCurve<F>& p, const Tolerances& tol = {});

struct LocalRoots {
  std::vector<double> grid;                 // absolute parameter values t
  std::vector<std::vector<Complex>> paths;  // paths[j][i] = lambda_j(t_i)
  std::vector<Complex> derivative;          // d lambda_j / dt at t0
  std::vector<Complex> difference_quotient; // one-sided quotient at t0 from the grid
};

// Differentiable root paths near t0 for curves passing differentiable_test:
// per cluster factor lambda = (t - t0) * mu(t) + shift(t), with mu tracked
// continuously as the roots of the reduced curve z^k + sum (-1)^j (a_j / h^j) z^{k-j}.
template <class F>
LocalRoots differentiable_roots_local(const PolyCurve<F>& p, const std::vector<double>& grid,
                                      const Tolerances& tol = {});

}  // namespace rootflow

#endif  // ROOTFLOW_DESINGULARIZE_HPP
