#ifndef ROOTFLOW_POLYCURVE_HPP
#define ROOTFLOW_POLYCURVE_HPP

#include "rootflow/jet.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace rootflow {

// Monic curve P(t)(z) = z^n + sum_j (-1)^j a_j(t) z^{n-j}, coefficients as jets.
template <class F>
class PolyCurve {
 public:
  PolyCurve() = default;
  // a holds a_1..a_n
  explicit PolyCurve(std::vector<Jet<F>> a);

  // From the ordinary coefficients c_1..c_n of z^{n-1}, ..., z^0.
  static PolyCurve from_standard(const std::vector<Jet<F>>& c);
  static PolyCurve from_roots(const std::vector<Jet<F>>& roots);
  static PolyCurve constant(const std::vector<F>& a, int order, double t0 = 0.0);

  int degree() const { return static_cast<int>(a_.size()); }
  int order() const;  // common truncation order
  double t0() const { return a_.empty() ? 0.0 : a_.front().t0(); }

  // a_j, 1-based
  const Jet<F>& a(int j) const { return a_[static_cast<std::size_t>(j - 1)]; }
  Jet<F>& a(int j) { return a_[static_cast<std::size_t>(j - 1)]; }
  const std::vector<Jet<F>>& coefficients() const { return a_; }
  // Coefficient of z^{n-j}, i.e. (-1)^j a_j.
  Jet<F> standard(int j) const { return j % 2 == 0 ? a(j) : -a(j); }

  // a_1(0), ..., a_n(0)
  std::vector<F> constant_part() const;
  // Ordinary coefficients at h = 0, ascending powers, monic (size n+1).
  std::vector<F> constant_standard_ascending() const;

  PolyCurve truncated(int order) const;
  // t -> P(sign * t^d)
  PolyCurve compose_power(int d, int sign) const;
  // P(z(h)) as a jet.
  Jet<F> evaluate(const Jet<F>& z) const;
  // Magnitude scale of the roots: max over j, m of |a_j[m]|^{1/j}.
  double root_scale() const;

 private:
  std::vector<Jet<F>> a_;
};

using ExactCurve = PolyCurve<Cyclo>;
using FloatCurve = PolyCurve<Complex>;

// sigma_1..sigma_n of the given values, over any commutative ring type.
template <class T>
std::vector<T> elementary_symmetric(const std::vector<T>& roots, const T& zero, const T& one) {
  const std::size_t n = roots.size();
  std::vector<T> e(n + 1, zero);
  e[0] = one;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] = e[k] + e[k - 1] * roots[i];
  return std::vector<T>(e.begin() + 1, e.end());
}

template <class F>
std::vector<F> elementary_from_roots(const std::vector<F>& roots) {
  return elementary_symmetric<F>(roots, F(0), F(1));
}

namespace detail {
template <class T>
T times_int(const T& x, int k) {
  if constexpr (requires { typename T::Scalar; }) return x * typename T::Scalar(k);
  else return x * T(k);
}
}  // namespace detail

// Power sums s_1..s_up_to from sigma_1..sigma_n through Newton's identities;
// sigma_k is read as 0 for k > n.
template <class T>
std::vector<T> newton_from_elementary(const std::vector<T>& sigma, int up_to, const T& zero) {
  const int n = static_cast<int>(sigma.size());
  std::vector<T> s(static_cast<std::size_t>(up_to + 1), zero);
  for (int k = 1; k <= up_to; ++k) {
    T acc = zero;
    for (int i = 1; i < k && i <= n; ++i) {
      T term = sigma[static_cast<std::size_t>(i - 1)] * s[static_cast<std::size_t>(k - i)];
      acc = (i % 2 == 1) ? acc + term : acc - term;
    }
    if (k <= n) {
      T term = detail::times_int(sigma[static_cast<std::size_t>(k - 1)], k);
      acc = (k % 2 == 1) ? acc + term : acc - term;
    }
    s[static_cast<std::size_t>(k)] = acc;
  }
  return std::vector<T>(s.begin() + 1, s.end());
}

template <class F>
struct BezoutiantData {
  std::vector<Jet<F>> newton;  // s_0..s_{2n-2}
  std::vector<Jet<F>> minors;  // Delta_1..Delta_n at index 0..n-1
  int n = 0;

  const Jet<F>& entry(int i, int j) const { return newton[static_cast<std::size_t>(i + j)]; }  // 0-based
  const Jet<F>& delta(int k) const { return minors[static_cast<std::size_t>(k - 1)]; }
  // Float mode: reference[k-1][m] bounds the absolute terms summed into
  // coefficient m of Delta_k, which sets the scale of its rounding error.
  std::vector<std::vector<double>> reference;
};

template <class F>
BezoutiantData<F> bezoutiant(const PolyCurve<F>& p);

// Leading principal minors of a square matrix of jets, computed without
// division by expanding along the last row with memoized column subsets.
template <class F>
std::vector<Jet<F>> leading_minors(const std::vector<std::vector<Jet<F>>>& m);

template <class F>
int distinct_root_count(const PolyCurve<F>& p, double eps = kDefaultEps);

struct Genericity {
  enum class Verdict { Generic, Undetermined };
  Verdict verdict = Verdict::Generic;
  int k = 1;          // maximal index with Delta_k not identically zero
  int order = 0;      // vanishing order of Delta_k
  int truncation = 0; // K of the inspected jets

  bool generic() const { return verdict == Verdict::Generic; }
};

template <class F>
Genericity genericity_check(const PolyCurve<F>& p, double eps = kDefaultEps);
template <class F>
Genericity genericity_check(const BezoutiantData<F>& b, double eps = kDefaultEps);

struct MultiplicityEquivalence {
  bool lhs = false;  // m(a_k) >= k r for all k
  bool rhs = false;  // m(Delta_k) >= k (k-1) r for all k
};

// Both sides of the equivalence between coefficient orders and Bezoutiant
// minor orders for curves with a_1 = 0. Throws UndeterminedOrder when a
// vanishing jet cannot settle an inequality.
template <class F>
MultiplicityEquivalence multiplicity_equivalence_check(const PolyCurve<F>& p, int r, double eps = kDefaultEps);

// Lower bound for the vanishing order of a jet together with whether it is exact.
struct OrderBound {
  int value = 0;
  bool exact = true;     // false: the jet vanishes and only value = K+1 is known
  bool infinite = false; // identically zero
  // Whether the order is provably >= bound, nullopt if undecidable.
  std::optional<bool> at_least(long bound) const {
    if (infinite) return true;
    if (exact) return value >= bound;
    if (value >= bound) return true;
    return std::nullopt;
  }
};

template <class F>
OrderBound order_bound(const Jet<F>& f, double eps = kDefaultEps, double reference = 0.0);
template <class F>
OrderBound order_bound(const Jet<F>& f, double eps, const std::vector<double>& reference);

// Coordinates of z^2 - f under the real polarization map at sample values:
// (0, 0, |f| + Re f, |f| - Re f, Im f).
std::array<double, 5> quadratic_lift_coordinates(Complex f);
std::vector<std::array<double, 5>> quadratic_lift_coordinates(const std::vector<Complex>& f);

// Jet version, only for real f: (0, 0, 2f, 0, 0) where f >= 0 on the chosen
// side of t0 (side = +1 for t >= t0, -1 for t <= t0) and (0, 0, 0, -2f, 0)
// where f <= 0. Throws UnsupportedInJetMode for complex f.
template <class F>
std::array<Jet<F>, 5> quadratic_lift_coordinates(const Jet<F>& f, int side = 1, double eps = kDefaultEps);

// Index pairs (i, j), 1 <= i + j <= n, in the order used by polarization_tau:
// by total degree, and within a degree (d,0), (0,d), (d-1,1), ..., (1,d-1).
std::vector<std::pair<int, int>> tau_index_pairs(int n);

// tau_{i,j}(x, y) = sum_k x_k^i y_k^j in the order of tau_index_pairs.
std::vector<double> polarization_tau(const std::vector<double>& x, const std::vector<double>& y);

// Complex power sums s_1..s_n recovered from the polarizations:
// s_m = sum_k binom(m,k) i^k tau_{m-k,k}.
std::vector<Complex> tau_inverse_T(const std::vector<double>& tau, int n);

long binomial(int n, int k);

}  // namespace rootflow

#endif  // ROOTFLOW_POLYCURVE_HPP
