#ifndef ROOTFLOW_CYCLOTOMIC_HPP
#define ROOTFLOW_CYCLOTOMIC_HPP

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace rootflow {

// Exact complex scalar: an element of the cyclotomic field Q(w), w = exp(2*pi*i/120).
//
// The field contains the Gaussian rationals (i = w^30), every root of unity of
// order dividing 120, and the real quadratic surds sqrt(2), sqrt(3), sqrt(5) and
// their products. Elements are stored sparsely in the power basis 1, w, ..., w^31
// reduced modulo the 120th cyclotomic polynomial, so equality and zero tests are
// exact and canonical.
class Cyclo {
 public:
  static constexpr int kOrder = 120;
  static constexpr int kDegree = 32;

  struct Term {
    int exp;
    mpq_class coeff;
    bool operator==(const Term& o) const { return exp == o.exp && coeff == o.coeff; }
  };

  Cyclo() = default;
  Cyclo(long v);  // NOLINT(google-explicit-constructor): integers embed naturally
  explicit Cyclo(const mpq_class& q);

  static Cyclo gaussian(const mpq_class& re, const mpq_class& im);
  static Cyclo root_of_unity(int k);  // w^k, any integer k
  static Cyclo imaginary_unit() { return root_of_unity(30); }

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  // Rational value if the element lies in Q.
  std::optional<mpq_class> as_rational() const;
  // (re, im) if the element is a Gaussian rational.
  std::optional<std::pair<mpq_class, mpq_class>> as_gaussian() const;

  std::complex<double> approx() const;
  Cyclo conj() const;
  Cyclo inverse() const;  // throws std::domain_error on zero

  Cyclo operator-() const;
  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo& operator*=(const Cyclo& o);
  Cyclo& operator/=(const Cyclo& o) { return *this *= o.inverse(); }

  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b);
  friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }
  friend bool operator==(const Cyclo& a, const Cyclo& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  // Human-readable form, e.g. "1/2 + 3*w^30" with w = exp(2*pi*i/120).
  std::string str() const;

  // Coefficients of the 120th cyclotomic polynomial, ascending (for tests).
  static const std::vector<long>& minimal_polynomial();

 private:
  std::vector<Term> terms_;  // sorted by exp, exp in [0, kDegree), coeff != 0
};

// Simplest rational whose nearest double is exactly `x` (so 0.1 -> 1/10).
mpq_class rational_from_double(double x);

// Parses "p/q", "-3", "0.125", "1e-3" exactly. Throws ParseError.
mpq_class parse_rational(const std::string& text);

// Square root inside the field when one can be found, else nullopt. Handles
// squares of recognizable elements and r * w^k with r rational whose squarefree
// part only involves the primes 2, 3, 5.
std::optional<Cyclo> exact_sqrt(const Cyclo& x);

// Candidate exact values near a floating point complex number: Gaussian
// rationals with small denominators and r * w^k with r rational. Candidates
// still need exact verification by the caller.
std::vector<Cyclo> recognize(std::complex<double> z);

}  // namespace rootflow

#endif  // ROOTFLOW_CYCLOTOMIC_HPP
