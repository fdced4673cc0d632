#include "rootflow/polycurve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace rootflow {

template <class F>
PolyCurve<F>::PolyCurve(std::vector<Jet<F>> a) : a_(std::move(a)) {
  if (a_.empty()) throw PreconditionViolated("polynomial curve needs degree >= 1");
  const int K = order();
  for (auto& c : a_) c = c.truncated(K);
}

template <class F>
PolyCurve<F> PolyCurve<F>::from_standard(const std::vector<Jet<F>>& c) {
  std::vector<Jet<F>> a;
  a.reserve(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) a.push_back(j % 2 == 0 ? -c[j] : c[j]);
  return PolyCurve(std::move(a));
}

template <class F>
PolyCurve<F> PolyCurve<F>::from_roots(const std::vector<Jet<F>>& roots) {
  if (roots.empty()) throw PreconditionViolated("from_roots: no roots");
  int K = roots.front().order();
  for (const auto& r : roots) K = std::min(K, r.order());
  const double t0 = roots.front().t0();
  return PolyCurve(elementary_symmetric<Jet<F>>(roots, Jet<F>(K, t0, true), Jet<F>::constant(F(1), K, t0)));
}

template <class F>
PolyCurve<F> PolyCurve<F>::constant(const std::vector<F>& a, int order, double t0) {
  std::vector<Jet<F>> j;
  for (const auto& x : a) j.push_back(Jet<F>::constant(x, order, t0));
  return PolyCurve(std::move(j));
}

template <class F>
int PolyCurve<F>::order() const {
  int K = a_.front().order();
  for (const auto& c : a_) K = std::min(K, c.order());
  return K;
}

template <class F>
std::vector<F> PolyCurve<F>::constant_part() const {
  std::vector<F> r;
  for (const auto& c : a_) r.push_back(c[0]);
  return r;
}

template <class F>
std::vector<F> PolyCurve<F>::constant_standard_ascending() const {
  const int n = degree();
  std::vector<F> r(static_cast<std::size_t>(n + 1));
  r[static_cast<std::size_t>(n)] = F(1);
  for (int j = 1; j <= n; ++j) r[static_cast<std::size_t>(n - j)] = j % 2 == 0 ? a(j)[0] : -a(j)[0];
  return r;
}

template <class F>
PolyCurve<F> PolyCurve<F>::truncated(int order) const {
  std::vector<Jet<F>> a;
  for (const auto& c : a_) a.push_back(c.truncated(order));
  return PolyCurve(std::move(a));
}

template <class F>
PolyCurve<F> PolyCurve<F>::compose_power(int d, int sign) const {
  std::vector<Jet<F>> a;
  for (const auto& c : a_) a.push_back(rootflow::compose_power(c, d, sign));
  return PolyCurve(std::move(a));
}

template <class F>
Jet<F> PolyCurve<F>::evaluate(const Jet<F>& z) const {
  const int K = std::min(order(), z.order());
  Jet<F> r = Jet<F>::constant(F(1), K, z.t0());
  for (int j = 1; j <= degree(); ++j) r = r * z + standard(j);
  return r;
}

template <class F>
double PolyCurve<F>::root_scale() const {
  double rho = 0.0;
  for (int j = 1; j <= degree(); ++j)
    for (const auto& c : a(j).coeffs()) {
      const double m = ScalarTraits<F>::magnitude(c);
      if (m > 0.0) rho = std::max(rho, std::pow(m, 1.0 / j));
    }
  return rho;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <class F>
std::vector<Jet<F>> leading_minors(const std::vector<std::vector<Jet<F>>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return {};
  if (n > 20) throw PreconditionViolated("leading_minors: dimension too large");
  const int K = m[0][0].order();
  const double t0 = m[0][0].t0();
  const std::size_t full = std::size_t{1} << n;
  std::vector<std::optional<Jet<F>>> det(full);
  det[0] = Jet<F>::constant(F(1), K, t0);
  // masks grouped by popcount = number of rows used
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int r = std::popcount(mask);
    Jet<F> acc(K, t0, true);
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const auto& sub = *det[mask & ~(std::size_t{1} << j)];
      const Jet<F>& e = m[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(j)];
      Jet<F> term = e * sub;
      if (((r - 1) + pos) % 2 == 0) acc += term;
      else acc -= term;
      ++pos;
    }
    det[mask] = std::move(acc);
  }
  std::vector<Jet<F>> out;
  for (int k = 1; k <= n; ++k) out.push_back(*det[(std::size_t{1} << k) - 1]);
  return out;
}

namespace {

using Series = std::vector<double>;

Series convolve(const Series& a, const Series& b) {
  Series r(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < r.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// Rounding scale of Delta_1..Delta_n: the Newton identities and the minor
// expansion rerun on coefficient magnitudes with every sign positive. Each
// coefficient of Delta_k is a signed sum whose absolute terms add up to at
// most the matching majorant coefficient.
template <class F>
std::vector<std::vector<double>> minor_majorants(const PolyCurve<F>& p) {
  const int n = p.degree();
  const std::size_t len = static_cast<std::size_t>(p.order() + 1);
  std::vector<Series> a;
  for (int j = 1; j <= n; ++j) {
    Series s(len, 0.0);
    for (std::size_t m = 0; m < len && m <= static_cast<std::size_t>(p.a(j).order()); ++m)
      s[m] = ScalarTraits<F>::magnitude(p.a(j)[static_cast<int>(m)]);
    a.push_back(std::move(s));
  }
  std::vector<Series> newton(static_cast<std::size_t>(2 * n - 1), Series(len, 0.0));
  newton[0][0] = n;
  for (int k = 1; k <= 2 * n - 2; ++k) {
    Series& acc = newton[static_cast<std::size_t>(k)];
    for (int i = 1; i < k && i <= n; ++i) {
      const Series t = convolve(a[static_cast<std::size_t>(i - 1)], newton[static_cast<std::size_t>(k - i)]);
      for (std::size_t m = 0; m < len; ++m) acc[m] += t[m];
    }
    if (k <= n)
      for (std::size_t m = 0; m < len; ++m) acc[m] += k * a[static_cast<std::size_t>(k - 1)][m];
  }
  const std::size_t full = std::size_t{1} << n;
  std::vector<Series> det(full);
  det[0] = Series(len, 0.0);
  det[0][0] = 1.0;
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int r = std::popcount(mask);
    Series acc(len, 0.0);
    for (int j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const Series t = convolve(newton[static_cast<std::size_t>(r - 1 + j)], det[mask & ~(std::size_t{1} << j)]);
      for (std::size_t m = 0; m < len; ++m) acc[m] += t[m];
    }
    det[mask] = std::move(acc);
  }
  std::vector<std::vector<double>> out;
  for (int k = 1; k <= n; ++k) out.push_back(det[(std::size_t{1} << k) - 1]);
  return out;
}

}  // namespace

template <class F>
BezoutiantData<F> bezoutiant(const PolyCurve<F>& p) {
  const int n = p.degree();
  const int K = p.order();
  const double t0 = p.t0();
  BezoutiantData<F> b;
  b.n = n;
  const Jet<F> zero(K, t0, true);
  std::vector<Jet<F>> sigma = p.coefficients();
  b.newton.push_back(Jet<F>::constant(F(n), K, t0));
  if (n >= 2) {
    auto s = newton_from_elementary<Jet<F>>(sigma, 2 * n - 2, zero);
    b.newton.insert(b.newton.end(), s.begin(), s.end());
  }
  std::vector<std::vector<Jet<F>>> h(static_cast<std::size_t>(n), std::vector<Jet<F>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b.entry(i, j);
  b.minors = leading_minors(h);
  if constexpr (ScalarTraits<F>::exact) b.reference.assign(static_cast<std::size_t>(n), {});
  else b.reference = minor_majorants(p);
  return b;
}

namespace {

template <class F>
OrderBound bound_from(const Jet<F>& f, std::optional<int> m) {
  OrderBound ob;
  if (m) {
    ob.value = *m;
    return ob;
  }
  ob.value = f.order() + 1;
  if (f.polynomial()) ob.infinite = true;
  else ob.exact = false;
  return ob;
}

}  // namespace

template <class F>
OrderBound order_bound(const Jet<F>& f, double eps, double reference) {
  return bound_from(f, jet_order(f, eps, reference));
}

template <class F>
OrderBound order_bound(const Jet<F>& f, double eps, const std::vector<double>& reference) {
  return bound_from(f, jet_order(f, eps, reference));
}

template <class F>
int distinct_root_count(const PolyCurve<F>& p, double eps) {
  const auto b = bezoutiant(p);
  for (int k = p.degree(); k >= 1; --k) {
    // data noise is measured against R^(k(k-1)), rounding against the majorant
    const double noise = eps * std::pow(std::max(p.root_scale(), 1.0), k * (k - 1));
    const double thr = ScalarTraits<F>::exact
                           ? 0.0
                           : std::max(noise, kMajorantRoundoff * b.reference[static_cast<std::size_t>(k - 1)][0]);
    if (!ScalarTraits<F>::is_zero(b.delta(k)[0], thr)) return k;
  }
  return 1;
}

template <class F>
Genericity genericity_check(const BezoutiantData<F>& b, double eps) {
  Genericity g;
  g.truncation = b.minors.empty() ? 0 : b.minors.front().order();
  bool unknown = false;
  for (int k = b.n; k >= 2; --k) {
    const auto ob = order_bound(b.delta(k), eps, b.reference[static_cast<std::size_t>(k - 1)]);
    if (ob.infinite) continue;
    if (!ob.exact) {
      if (!unknown) g.k = k;
      unknown = true;
      continue;
    }
    if (unknown) break;
    g.k = k;
    g.order = ob.value;
    return g;
  }
  if (unknown) {
    g.verdict = Genericity::Verdict::Undetermined;
    g.order = g.truncation + 1;
    return g;
  }
  g.k = 1;
  g.order = 0;
  return g;
}

template <class F>
Genericity genericity_check(const PolyCurve<F>& p, double eps) {
  return genericity_check(bezoutiant(p), eps);
}

template <class F>
MultiplicityEquivalence multiplicity_equivalence_check(const PolyCurve<F>& p, int r, double eps) {
  if (r < 0) throw PreconditionViolated("multiplicity_equivalence_check: r must be nonnegative");
  const int n = p.degree();
  const double rho = p.root_scale();
  if (jet_order(p.a(1), eps, rho)) throw PreconditionViolated("multiplicity_equivalence_check: a_1 must vanish");
  const auto b = bezoutiant(p);
  MultiplicityEquivalence res{true, true};
  for (int k = 2; k <= n; ++k) {
    const auto lhs = order_bound(p.a(k), eps, std::pow(rho, k)).at_least(static_cast<long>(k) * r);
    if (!lhs) throw UndeterminedOrder("order of a_" + std::to_string(k) + " exceeds the truncation");
    res.lhs = res.lhs && *lhs;
    const auto rhs = order_bound(b.delta(k), eps, b.reference[static_cast<std::size_t>(k - 1)])
                         .at_least(static_cast<long>(k) * (k - 1) * r);
    if (!rhs) throw UndeterminedOrder("order of Delta_" + std::to_string(k) + " exceeds the truncation");
    res.rhs = res.rhs && *rhs;
  }
  return res;
}

std::array<double, 5> quadratic_lift_coordinates(Complex f) {
  const double a = std::abs(f);
  return {0.0, 0.0, a + f.real(), a - f.real(), f.imag()};
}

std::vector<std::array<double, 5>> quadratic_lift_coordinates(const std::vector<Complex>& f) {
  std::vector<std::array<double, 5>> out;
  out.reserve(f.size());
  for (const auto& v : f) out.push_back(quadratic_lift_coordinates(v));
  return out;
}

template <class F>
std::array<Jet<F>, 5> quadratic_lift_coordinates(const Jet<F>& f, int side, double eps) {
  using T = ScalarTraits<F>;
  if (side != 1 && side != -1) throw PreconditionViolated("quadratic_lift_coordinates: side must be +1 or -1");
  const double thr = zero_threshold(f, eps);
  for (const auto& c : f.coeffs()) {
    const bool real = T::exact ? (c == T::conj(c)) : std::abs(T::approx(c).imag()) <= thr;
    if (!real) throw UnsupportedInJetMode("quadratic_lift_coordinates: |f| of a complex jet is not a jet");
  }
  const Jet<F> zero(f.order(), f.t0(), true);
  std::array<Jet<F>, 5> out{zero, zero, zero, zero, zero};
  const auto m = jet_order(f, eps);
  if (!m) {
    for (auto& j : out) j.set_polynomial(f.polynomial());
    return out;
  }
  int sign = T::approx(f[*m]).real() > 0 ? 1 : -1;
  if (side < 0 && *m % 2 == 1) sign = -sign;
  if (sign > 0) out[2] = f * F(2);
  else out[3] = f * F(-2);
  return out;
}

std::vector<std::pair<int, int>> tau_index_pairs(int n) {
  std::vector<std::pair<int, int>> idx;
  for (int d = 1; d <= n; ++d) {
    idx.emplace_back(d, 0);
    idx.emplace_back(0, d);
    for (int j = 1; j < d; ++j) idx.emplace_back(d - j, j);
  }
  return idx;
}

std::vector<double> polarization_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw PreconditionViolated("polarization_tau: x and y differ in length");
  const int n = static_cast<int>(x.size());
  std::vector<double> tau;
  for (const auto& [i, j] : tau_index_pairs(n)) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      double term = 1.0;
      for (int e = 0; e < i; ++e) term *= x[static_cast<std::size_t>(k)];
      for (int e = 0; e < j; ++e) term *= y[static_cast<std::size_t>(k)];
      s += term;
    }
    tau.push_back(s);
  }
  return tau;
}

std::vector<Complex> tau_inverse_T(const std::vector<double>& tau, int n) {
  const auto idx = tau_index_pairs(n);
  if (tau.size() != idx.size())
    throw PreconditionViolated("tau_inverse_T: expected " + std::to_string(idx.size()) + " values");
  auto lookup = [&](int i, int j) {
    for (std::size_t q = 0; q < idx.size(); ++q)
      if (idx[q].first == i && idx[q].second == j) return tau[q];
    return 0.0;
  };
  const Complex iu(0.0, 1.0);
  std::vector<Complex> s;
  for (int m = 1; m <= n; ++m) {
    Complex acc = 0.0, ipow = 1.0;
    for (int k = 0; k <= m; ++k) {
      acc += static_cast<double>(binomial(m, k)) * ipow * lookup(m - k, k);
      ipow *= iu;
    }
    s.push_back(acc);
  }
  return s;
}

#define ROOTFLOW_INSTANTIATE(F)                                                                       \
  template class PolyCurve<F>;                                                                        \
  template std::vector<Jet<F>> leading_minors(const std::vector<std::vector<Jet<F>>>&);               \
  template BezoutiantData<F> bezoutiant(const PolyCurve<F>&);                                         \
  template OrderBound order_bound(const Jet<F>&, double, double);                                     \
  template OrderBound order_bound(const Jet<F>&, double, const std::vector<double>&);                   \
  template int distinct_root_count(const PolyCurve<F>&, double);                                      \
  template Genericity genericity_check(const BezoutiantData<F>&, double);                             \
  template Genericity genericity_check(const PolyCurve<F>&, double);                                  \
  template MultiplicityEquivalence multiplicity_equivalence_check(const PolyCurve<F>&, int, double);  \
  template std::array<Jet<F>, 5> quadratic_lift_coordinates(const Jet<F>&, int, double);

ROOTFLOW_INSTANTIATE(Cyclo)
ROOTFLOW_INSTANTIATE(Complex)

#undef ROOTFLOW_INSTANTIATE

}  // namespace rootflow
