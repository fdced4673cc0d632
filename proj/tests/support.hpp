#ifndef ROOTFLOW_TESTS_SUPPORT_HPP
#define ROOTFLOW_TESTS_SUPPORT_HPP

#include "rootflow/rootflow.hpp"

#include <doctest.h>

#include <initializer_list>
#include <random>
#include <vector>

namespace rootflow::testing {

// Jet with the given leading coefficients, padded with zeros up to `order`.
inline ExactJet ej(std::initializer_list<long> c, int order = -1) {
  const int K = std::max(order, static_cast<int>(c.size()) - 1);
  ExactJet j(K);
  int m = 0;
  for (long v : c) j[m++] = Cyclo(v);
  return j;
}

inline FloatJet fj(std::initializer_list<Complex> c, int order = -1, bool polynomial = true) {
  const int K = std::max(order, static_cast<int>(c.size()) - 1);
  FloatJet j(K, 0.0, polynomial);
  int m = 0;
  for (const Complex& v : c) j[m++] = v;
  return j;
}

inline ExactJet ex_mono(long c, int p, int K) { return ExactJet::monomial(Cyclo(c), p, K); }

// z^n - c t^p
inline ExactCurve binomial_curve(int n, long c, int p, int K = 16) {
  std::vector<ExactJet> s(static_cast<std::size_t>(n), ExactJet(K));
  s.back() = -ex_mono(c, p, K);
  return ExactCurve::from_standard(s);
}

inline double max_diff(const FloatJet& a, const FloatJet& b) {
  double m = 0.0;
  for (int i = 0; i <= std::min(a.order(), b.order()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Whether `got` equals `want` as multisets within tol.
inline bool same_multiset(std::vector<Complex> got, std::vector<Complex> want, double tol) {
  if (got.size() != want.size()) return false;
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](const Complex& a, const Complex& b) { return std::abs(a - w) < std::abs(b - w); });
    if (it == got.end() || std::abs(*it - w) > tol) return false;
    got.erase(it);
  }
  return true;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(7);
  return r;
}

inline long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }
inline double rand_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline Complex rand_complex() { return {rand_real(-1, 1), rand_real(-1, 1)}; }
inline Cyclo rand_gaussian() {
  return Cyclo::gaussian(mpq_class(rand_int(-5, 5), rand_int(1, 4)), mpq_class(rand_int(-5, 5), rand_int(1, 4)));
}

}  // namespace rootflow::testing

#endif  // ROOTFLOW_TESTS_SUPPORT_HPP
