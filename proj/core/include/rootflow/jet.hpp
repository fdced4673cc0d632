#ifndef ROOTFLOW_JET_HPP
#define ROOTFLOW_JET_HPP

#include "rootflow/errors.hpp"
#include "rootflow/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rootflow {

// Truncated power series f(t0 + h) = c_0 + c_1 h + ... + c_K h^K + O(h^{K+1}).
//
// `polynomial()` records that the tail beyond h^K is known to vanish, i.e. the
// jet is the full Taylor expansion of a polynomial. Only then can a zero jet be
// read as the zero function; otherwise a vanishing jet merely says the order of
// flatness is at least K+1.
template <class F>
class Jet {
 public:
  using Scalar = F;
  using Traits = ScalarTraits<F>;

  Jet() : Jet(0) {}
  explicit Jet(int order, double t0 = 0.0, bool polynomial = true)
      : c_(static_cast<std::size_t>(order + 1)), t0_(t0), polynomial_(polynomial) {
    if (order < 0) throw PreconditionViolated("jet order must be nonnegative");
  }
  Jet(std::vector<F> coeffs, bool polynomial, double t0 = 0.0)
      : c_(std::move(coeffs)), t0_(t0), polynomial_(polynomial) {
    if (c_.empty()) throw PreconditionViolated("jet needs at least one coefficient");
  }

  static Jet constant(const F& c, int order, double t0 = 0.0) {
    Jet j(order, t0, true);
    j.c_[0] = c;
    return j;
  }
  // The local variable h itself.
  static Jet variable(int order, double t0 = 0.0) {
    Jet j(order, t0, true);
    if (order >= 1) j.c_[1] = F(1);
    else j.polynomial_ = false;
    return j;
  }
  // c * h^p
  static Jet monomial(const F& c, int p, int order, double t0 = 0.0) {
    Jet j(order, t0, true);
    if (p <= order) j.c_[static_cast<std::size_t>(p)] = c;
    else if (!Traits::is_zero(c, 0.0)) j.polynomial_ = false;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double t0() const { return t0_; }
  void set_t0(double t0) { t0_ = t0; }
  bool polynomial() const { return polynomial_; }
  void set_polynomial(bool p) { polynomial_ = p; }

  const F& operator[](int m) const { return c_[static_cast<std::size_t>(m)]; }
  F& operator[](int m) { return c_[static_cast<std::size_t>(m)]; }
  const std::vector<F>& coeffs() const { return c_; }

  // Largest index of a literally nonzero coefficient, -1 for the zero jet.
  int degree() const {
    for (int m = order(); m >= 0; --m)
      if (!Traits::is_zero(c_[static_cast<std::size_t>(m)], 0.0)) return m;
    return -1;
  }
  bool is_zero() const { return degree() < 0; }
  // Zero as a function: zero coefficients and known-zero tail.
  bool identically_zero() const { return polynomial_ && is_zero(); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, Traits::magnitude(x));
    return m;
  }

  Jet truncated(int order) const {
    if (order >= this->order()) return *this;
    Jet r(std::vector<F>(c_.begin(), c_.begin() + order + 1), polynomial_, t0_);
    if (polynomial_ && degree() > order) r.polynomial_ = false;
    return r;
  }

  // Value of the truncated series at h (float evaluation).
  Complex eval(double h) const {
    Complex s = 0.0;
    for (int m = order(); m >= 0; --m) s = s * h + Traits::approx(c_[static_cast<std::size_t>(m)]);
    return s;
  }
  // Derivative of the truncated series with respect to h.
  Jet derivative() const {
    if (order() == 0) return Jet(0, t0_, polynomial_);
    Jet r(order() - 1, t0_, polynomial_);
    for (int m = 1; m <= order(); ++m) r.c_[static_cast<std::size_t>(m - 1)] = c_[static_cast<std::size_t>(m)] * F(m);
    return r;
  }

  Jet conj() const {
    Jet r = *this;
    for (auto& x : r.c_) x = Traits::conj(x);
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    if (o.order() < order()) *this = truncated(o.order());
    for (int m = 0; m <= order(); ++m) c_[static_cast<std::size_t>(m)] += o.c_[static_cast<std::size_t>(m)];
    polynomial_ = polynomial_ && o.polynomial_ && o.degree() <= order();
    return *this;
  }
  Jet& operator-=(const Jet& o) { return *this += -o; }

  Jet& operator*=(const F& s) {
    for (auto& x : c_) x *= s;
    if (Traits::is_zero(s, 0.0)) polynomial_ = true;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const F& s) { return a *= s; }
  friend Jet operator*(const F& s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int K = std::min(a.order(), b.order());
    Jet r(K, a.t0_, true);
    const int da = a.degree(), db = b.degree();
    if (da < 0 || db < 0) {
      // zero times anything: zero, and a known-zero function annihilates any tail
      r.polynomial_ = (da < 0 && a.polynomial_) || (db < 0 && b.polynomial_);
      return r;
    }
    for (int i = 0; i <= std::min(K, da); ++i) {
      const F& x = a.c_[static_cast<std::size_t>(i)];
      if (Traits::is_zero(x, 0.0)) continue;
      for (int j = 0; i + j <= K && j <= db; ++j) {
        const F& y = b.c_[static_cast<std::size_t>(j)];
        if (Traits::is_zero(y, 0.0)) continue;
        r.c_[static_cast<std::size_t>(i + j)] += x * y;
      }
    }
    r.polynomial_ = a.polynomial_ && b.polynomial_ && da + db <= K;
    return r;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  friend bool operator==(const Jet& a, const Jet& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

 private:
  std::vector<F> c_;
  double t0_ = 0.0;
  bool polynomial_ = true;
};

using ExactJet = Jet<Cyclo>;
using FloatJet = Jet<Complex>;

// Threshold below which a float coefficient of `f` counts as zero.
template <class F>
double zero_threshold(const Jet<F>& f, double eps, double reference = 0.0) {
  if constexpr (ScalarTraits<F>::exact) return 0.0;
  return eps * std::max(f.max_abs(), reference);
}

// Index of the first nonvanishing coefficient; nullopt when every coefficient
// vanishes (FLAT: the order is at least K+1 and undetermined beyond).
template <class F>
std::optional<int> jet_order(const Jet<F>& f, double eps = kDefaultEps, double reference = 0.0) {
  const double thr = zero_threshold(f, eps, reference);
  if constexpr (!ScalarTraits<F>::exact) {
    if (thr == 0.0) return std::nullopt;  // all coefficients are exactly zero
  }
  for (int m = 0; m <= f.order(); ++m)
    if (!ScalarTraits<F>::is_zero(f[m], thr)) return m;
  return std::nullopt;
}

// Majorants of absolute summands overestimate the rounding error of a sum by
// orders of magnitude, so they are scaled by a roundoff factor rather than by
// the data tolerance.
inline constexpr double kMajorantRoundoff = 1e3 * std::numeric_limits<double>::epsilon();

// As above with a majorant per coefficient, for jets whose rounding error is
// known coefficientwise.
template <class F>
std::optional<int> jet_order(const Jet<F>& f, double eps, const std::vector<double>& majorant) {
  if constexpr (ScalarTraits<F>::exact) return jet_order(f, eps);
  const double own = f.max_abs();
  for (int m = 0; m <= f.order(); ++m) {
    const double ref = static_cast<std::size_t>(m) < majorant.size() ? majorant[static_cast<std::size_t>(m)] : 0.0;
    const double thr = std::max(eps * own, kMajorantRoundoff * ref);
    if (thr > 0.0 && !ScalarTraits<F>::is_zero(f[m], thr)) return m;
  }
  return std::nullopt;
}

// f / h^p, order K - p.
template <class F>
Jet<F> shift_divide(const Jet<F>& f, int p, double eps = kDefaultEps, double reference = 0.0) {
  if (p < 0) throw PreconditionViolated("shift_divide: negative shift");
  if (p == 0) return f;
  const auto m = jet_order(f, eps, reference);
  if (m && *m < p) throw OrderTooLow("shift_divide: order " + std::to_string(*m) + " < " + std::to_string(p));
  if (p > f.order()) throw TruncationExhausted("shift_divide: shift " + std::to_string(p) + " exceeds jet order " + std::to_string(f.order()));
  std::vector<F> c(f.coeffs().begin() + p, f.coeffs().end());
  return Jet<F>(std::move(c), f.polynomial(), f.t0());
}

// f(sign * h^d), order d*K.
template <class F>
Jet<F> compose_power(const Jet<F>& f, int d, int sign) {
  if (d < 1) throw PreconditionViolated("compose_power: d must be positive");
  if (sign != 1 && sign != -1) throw PreconditionViolated("compose_power: sign must be +1 or -1");
  Jet<F> r(d * f.order(), f.t0(), f.polynomial());
  for (int m = 0; m <= f.order(); ++m) {
    F c = f[m];
    if (sign < 0 && m % 2 == 1) c = -c;
    r[d * m] = c;
  }
  return r;
}

// Multiplicative inverse; requires an invertible constant term.
template <class F>
Jet<F> reciprocal(const Jet<F>& f, double eps = kDefaultEps) {
  const double thr = ScalarTraits<F>::exact ? 0.0 : eps * std::max(f.max_abs(), 1e-300);
  if (ScalarTraits<F>::is_zero(f[0], thr)) throw NotInvertible("reciprocal: constant term vanishes");
  const int K = f.order();
  Jet<F> g(K, f.t0(), f.polynomial() && f.degree() == 0);
  const F inv = F(1) / f[0];
  g[0] = inv;
  for (int m = 1; m <= K; ++m) {
    F s{};
    for (int j = 1; j <= m; ++j)
      if (!ScalarTraits<F>::is_zero(f[j], 0.0)) s += f[j] * g[m - j];
    g[m] = -(s * inv);
  }
  return g;
}

// f^e
template <class F>
Jet<F> jet_power(const Jet<F>& f, int e) {
  Jet<F> r = Jet<F>::constant(F(1), f.order(), f.t0());
  for (int i = 0; i < e; ++i) r *= f;
  return r;
}

}  // namespace rootflow

#endif  // ROOTFLOW_JET_HPP
