#ifndef ROOTFLOW_SCALAR_HPP
#define ROOTFLOW_SCALAR_HPP

#include "rootflow/cyclotomic.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <string>

namespace rootflow {

using Complex = std::complex<double>;

inline constexpr double kDefaultEps = 1e-10;

// Numerical knobs shared by every operation that has to decide "is this zero".
struct Tolerances {
  double eps = kDefaultEps;       // relative zero threshold of the float backend
  double cluster_tol = 1e-6;      // user part of the root clustering threshold
};

template <class F>
struct ScalarTraits;

template <>
struct ScalarTraits<Cyclo> {
  static constexpr bool exact = true;
  static Complex approx(const Cyclo& x) { return x.approx(); }
  static Cyclo conj(const Cyclo& x) { return x.conj(); }
  static bool is_zero(const Cyclo& x, double /*threshold*/) { return x.is_zero(); }
  static double magnitude(const Cyclo& x) { return x.is_zero() ? 0.0 : std::abs(x.approx()); }
  static std::optional<Cyclo> sqrt(const Cyclo& x) { return exact_sqrt(x); }
  static Cyclo from_rational(const mpq_class& q) { return Cyclo(q); }
  static Cyclo from_gaussian(const mpq_class& re, const mpq_class& im) { return Cyclo::gaussian(re, im); }
  static std::string str(const Cyclo& x) { return x.str(); }
  static constexpr const char* name = "exact";
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex approx(const Complex& x) { return x; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static bool is_zero(const Complex& x, double threshold) { return std::abs(x) <= threshold; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static std::optional<Complex> sqrt(const Complex& x) { return std::sqrt(x); }
  static Complex from_rational(const mpq_class& q) { return q.get_d(); }
  static Complex from_gaussian(const mpq_class& re, const mpq_class& im) { return {re.get_d(), im.get_d()}; }
  static std::string str(const Complex& x);
  static constexpr const char* name = "float";
};

// "Is zero" for a scalar measured against a reference magnitude.
template <class F>
bool negligible(const F& x, double reference, double eps) {
  return ScalarTraits<F>::is_zero(x, eps * reference);
}

}  // namespace rootflow

#endif  // ROOTFLOW_SCALAR_HPP
