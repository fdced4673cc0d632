#include "rootflow/cyclotomic.hpp"

#include "rootflow/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace rootflow {
namespace {

using IntPoly = std::vector<long>;  // ascending coefficients

IntPoly int_divide_exact(IntPoly num, const IntPoly& den) {
  // den is monic
  const int dn = static_cast<int>(den.size()) - 1;
  const int nn = static_cast<int>(num.size()) - 1;
  IntPoly q(static_cast<std::size_t>(nn - dn + 1), 0);
  for (int k = nn - dn; k >= 0; --k) {
    const long c = num[static_cast<std::size_t>(k + dn)];
    q[static_cast<std::size_t>(k)] = c;
    for (int j = 0; j <= dn; ++j) num[static_cast<std::size_t>(k + j)] -= c * den[static_cast<std::size_t>(j)];
  }
  return q;
}

IntPoly int_multiply(const IntPoly& a, const IntPoly& b) {
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

IntPoly cyclotomic_polynomial(int n) {
  IntPoly num(static_cast<std::size_t>(n + 1), 0);
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  IntPoly den{1};
  for (int d = 1; d < n; ++d)
    if (n % d == 0) den = int_multiply(den, cyclotomic_polynomial(d));
  return int_divide_exact(num, den);
}

struct Tables {
  IntPoly phi;
  // w^e reduced to the power basis, for e in [0, kOrder).
  std::array<std::vector<std::pair<int, long>>, Cyclo::kOrder> power;
  std::array<std::complex<double>, Cyclo::kDegree> basis_value;

  Tables() : phi(cyclotomic_polynomial(Cyclo::kOrder)) {
    if (static_cast<int>(phi.size()) != Cyclo::kDegree + 1) throw std::logic_error("bad cyclotomic degree");
    std::vector<long> cur(Cyclo::kDegree, 0);
    cur[0] = 1;
    for (int e = 0; e < Cyclo::kOrder; ++e) {
      for (int k = 0; k < Cyclo::kDegree; ++k)
        if (cur[static_cast<std::size_t>(k)] != 0) power[static_cast<std::size_t>(e)].emplace_back(k, cur[static_cast<std::size_t>(k)]);
      // multiply by w and reduce
      const long top = cur[Cyclo::kDegree - 1];
      for (int k = Cyclo::kDegree - 1; k > 0; --k) cur[static_cast<std::size_t>(k)] = cur[static_cast<std::size_t>(k - 1)];
      cur[0] = 0;
      if (top != 0)
        for (int k = 0; k < Cyclo::kDegree; ++k) cur[static_cast<std::size_t>(k)] -= top * phi[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < Cyclo::kDegree; ++k) {
      const double ang = 2.0 * std::numbers::pi * k / Cyclo::kOrder;
      basis_value[static_cast<std::size_t>(k)] = {std::cos(ang), std::sin(ang)};
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

int mod_order(long k) {
  long r = k % Cyclo::kOrder;
  if (r < 0) r += Cyclo::kOrder;
  return static_cast<int>(r);
}

// Dense scratch accumulator for products; avoids reallocating mpq limbs.
struct Accumulator {
  std::array<mpq_class, Cyclo::kDegree> acc;
  std::array<bool, Cyclo::kDegree> touched{};
  mpq_class tmp;

  void add_power(int e, const mpq_class& c) {
    for (const auto& [k, m] : tables().power[static_cast<std::size_t>(e)]) {
      auto& slot = acc[static_cast<std::size_t>(k)];
      if (!touched[static_cast<std::size_t>(k)]) {
        touched[static_cast<std::size_t>(k)] = true;
        slot = 0;
      }
      if (m == 1) {
        slot += c;
      } else if (m == -1) {
        slot -= c;
      } else {
        tmp = c;
        tmp *= m;
        slot += tmp;
      }
    }
  }

  std::vector<Cyclo::Term> collect() {
    std::vector<Cyclo::Term> out;
    for (int k = 0; k < Cyclo::kDegree; ++k) {
      if (!touched[static_cast<std::size_t>(k)]) continue;
      touched[static_cast<std::size_t>(k)] = false;
      if (sgn(acc[static_cast<std::size_t>(k)]) != 0) out.push_back({k, acc[static_cast<std::size_t>(k)]});
    }
    return out;
  }
};

Accumulator& scratch() {
  thread_local Accumulator a;
  return a;
}

// Dense polynomials over Q for the extended Euclidean inverse.
using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

std::pair<QPoly, QPoly> divmod(QPoly num, const QPoly& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) return {QPoly{}, num};
  QPoly q(num.size() - dn, 0);
  for (std::size_t k = num.size() - den.size() + 1; k-- > 0;) {
    mpq_class c = num[k + dn] / den[dn];
    q[k] = c;
    if (sgn(c) == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[k + j] -= c * den[j];
  }
  trim(q);
  num.resize(dn);
  trim(num);
  return {q, num};
}

QPoly sub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
  QPoly r = a;
  if (q.empty() || b.empty()) return r;
  if (r.size() < q.size() + b.size() - 1) r.resize(q.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= q[i] * b[j];
  trim(r);
  return r;
}

std::optional<mpq_class> approx_rational(double x, double tol, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued fraction convergents
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const mpz_class ai(static_cast<long>(a));
    mpz_class h2 = ai * h1 + h0;
    mpz_class k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    mpq_class cand(h1, k1);
    cand.canonicalize();
    if (std::abs(cand.get_d() - x) <= tol) return cand;
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

const Cyclo& surd(int which) {
  // sqrt(2) = w^15 + w^-15, sqrt(3) = w^10 + w^-10, sqrt(5) = 1 + 2 (w^24 + w^-24)
  static const Cyclo s2 = Cyclo::root_of_unity(15) + Cyclo::root_of_unity(-15);
  static const Cyclo s3 = Cyclo::root_of_unity(10) + Cyclo::root_of_unity(-10);
  static const Cyclo s5 = Cyclo(1) + Cyclo(2) * (Cyclo::root_of_unity(24) + Cyclo::root_of_unity(-24));
  switch (which) {
    case 2: return s2;
    case 3: return s3;
    default: return s5;
  }
}

// sqrt of a positive integer when its squarefree part divides 30.
std::optional<Cyclo> sqrt_integer(mpz_class n) {
  if (n == 0) return Cyclo();
  Cyclo radical(1);
  for (int p : {2, 3, 5}) {
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
      n /= p;
      ++e;
    }
    if (e % 2 == 1) radical *= surd(p);
    mpz_class f;
    mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e / 2));
    radical *= Cyclo(mpq_class(f));
  }
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return radical * Cyclo(mpq_class(s));
}

std::optional<Cyclo> sqrt_rational(const mpq_class& r) {
  // sqrt(p/q) = sqrt(p q) / q
  if (sgn(r) < 0) return std::nullopt;
  mpz_class pq = r.get_num() * r.get_den();
  auto s = sqrt_integer(pq);
  if (!s) return std::nullopt;
  return *s * Cyclo(mpq_class(mpz_class(1), r.get_den()));
}

}  // namespace

Cyclo::Cyclo(long v) {
  if (v != 0) terms_.push_back({0, mpq_class(v)});
}

// Callers may hand in p/q not in lowest terms; equality needs canonical form.
Cyclo::Cyclo(const mpq_class& q) {
  if (sgn(q) == 0) return;
  terms_.push_back({0, q});
  terms_.back().coeff.canonicalize();
}

Cyclo Cyclo::gaussian(const mpq_class& re, const mpq_class& im) {
  Cyclo r(re);
  if (sgn(im) != 0) {
    r.terms_.push_back({30, im});
    r.terms_.back().coeff.canonicalize();
  }
  return r;
}

Cyclo Cyclo::root_of_unity(int k) {
  Cyclo r;
  for (const auto& [e, c] : tables().power[static_cast<std::size_t>(mod_order(k))]) r.terms_.push_back({e, mpq_class(c)});
  return r;
}

const std::vector<long>& Cyclo::minimal_polynomial() { return tables().phi; }

std::optional<mpq_class> Cyclo::as_rational() const {
  if (terms_.empty()) return mpq_class(0);
  if (terms_.size() == 1 && terms_[0].exp == 0) return terms_[0].coeff;
  return std::nullopt;
}

std::optional<std::pair<mpq_class, mpq_class>> Cyclo::as_gaussian() const {
  mpq_class re = 0, im = 0;
  for (const auto& t : terms_) {
    if (t.exp == 0) re = t.coeff;
    else if (t.exp == 30) im = t.coeff;
    else return std::nullopt;
  }
  return std::make_pair(re, im);
}

std::complex<double> Cyclo::approx() const {
  std::complex<double> s = 0.0;
  for (const auto& t : terms_) s += t.coeff.get_d() * tables().basis_value[static_cast<std::size_t>(t.exp)];
  return s;
}

Cyclo Cyclo::conj() const {
  if (terms_.empty()) return {};
  auto& acc = scratch();
  for (const auto& t : terms_) acc.add_power(mod_order(-t.exp), t.coeff);
  Cyclo r;
  r.terms_ = acc.collect();
  return r;
}

Cyclo Cyclo::operator-() const {
  Cyclo r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].exp < o.terms_[j].exp)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].exp < terms_[i].exp) {
      out.push_back(o.terms_[j++]);
    } else {
      mpq_class c = terms_[i].coeff + o.terms_[j].coeff;
      if (sgn(c) != 0) out.push_back({terms_[i].exp, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) { return *this += -o; }

Cyclo operator*(const Cyclo& a, const Cyclo& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  if (a.terms_.size() == 1 && a.terms_[0].exp == 0) {
    Cyclo r = b;
    for (auto& t : r.terms_) t.coeff *= a.terms_[0].coeff;
    return r;
  }
  if (b.terms_.size() == 1 && b.terms_[0].exp == 0) return b * a;
  auto& acc = scratch();
  mpq_class prod;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      prod = x.coeff * y.coeff;
      acc.add_power(x.exp + y.exp, prod);
    }
  Cyclo r;
  r.terms_ = acc.collect();
  return r;
}

Cyclo& Cyclo::operator*=(const Cyclo& o) { return *this = *this * o; }

Cyclo Cyclo::inverse() const {
  if (terms_.empty()) throw std::domain_error("Cyclo: division by zero");
  if (terms_.size() == 1) {
    // q w^e  ->  q^-1 w^-e
    Cyclo r = root_of_unity(-terms_[0].exp);
    const mpq_class inv = 1 / terms_[0].coeff;
    for (auto& t : r.terms_) t.coeff *= inv;
    return r;
  }
  if (auto g = as_gaussian()) {
    const mpq_class n = g->first * g->first + g->second * g->second;
    return gaussian(g->first / n, -g->second / n);
  }
  QPoly a(kDegree, 0);
  for (const auto& t : terms_) a[static_cast<std::size_t>(t.exp)] = t.coeff;
  trim(a);
  QPoly r0(tables().phi.begin(), tables().phi.end());
  QPoly r1 = a;
  QPoly s0, s1{mpq_class(1)};
  while (r1.size() > 1) {
    auto [q, rem] = divmod(r0, r1);
    QPoly s2 = sub_mul(s0, q, s1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw std::logic_error("Cyclo: element shares a factor with the minimal polynomial");
  const mpq_class inv = 1 / r1[0];
  Cyclo out;
  for (std::size_t k = 0; k < s1.size(); ++k)
    if (sgn(s1[k]) != 0) out.terms_.push_back({static_cast<int>(k), s1[k] * inv});
  return out;
}

std::string Cyclo::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) s += " + ";
    s += terms_[i].coeff.get_str();
    if (terms_[i].exp > 0) s += "*w^" + std::to_string(terms_[i].exp);
  }
  return s;
}

mpq_class rational_from_double(double x) {
  if (!std::isfinite(x)) throw ParseError("non-finite number");
  mpq_class exact(x);
  if (exact.get_den() == 1) return exact;
  // continued fraction convergents of the exact binary value
  mpz_class num = exact.get_num(), den = exact.get_den();
  // accept a convergent once it lies within half an ulp of x on either side
  const double up = std::nextafter(x, HUGE_VAL) - x;
  const double down = x - std::nextafter(x, -HUGE_VAL);
  const mpq_class half_gap = mpq_class(std::min(up, down)) / 2;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  while (den != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    mpq_class cand(h1, k1);
    cand.canonicalize();
    if (abs(cand - exact) < half_gap) return cand;
    mpz_class rem = num - a * den;
    num = den;
    den = rem;
  }
  return exact;
}

mpq_class parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty number");
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      mpq_class q(parse_rational(s.substr(0, slash)) / parse_rational(s.substr(slash + 1)));
      return q;
    }
  } catch (const std::exception&) {
    throw ParseError("invalid rational '" + text + "'");
  }
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("invalid number '" + text + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw ParseError("invalid number '" + text + "'");
    try {
      std::size_t used = 0;
      exp10 += std::stol(s.substr(pos + 1), &used);
      if (pos + 1 + used != s.size()) throw ParseError("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("invalid exponent in '" + text + "'");
    }
  }
  mpz_class m(digits, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(m * p) : mpq_class(m, p);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::vector<Cyclo> recognize(std::complex<double> z) {
  std::vector<Cyclo> out;
  const double mag = std::abs(z);
  const double tol = 1e-9 * std::max(1.0, mag);
  constexpr long kMaxDen = 1000000;
  auto re = approx_rational(z.real(), tol, kMaxDen);
  auto im = approx_rational(z.imag(), tol, kMaxDen);
  if (re && im) out.push_back(Cyclo::gaussian(*re, *im));
  if (mag == 0.0) {
    out.emplace_back();
    return out;
  }
  const double step = 2.0 * std::numbers::pi / Cyclo::kOrder;
  const int k = mod_order(std::lround(std::arg(z) / step));
  if (std::abs(std::arg(z) - std::remainder(k * step, 2.0 * std::numbers::pi)) > 1e-8 &&
      std::abs(std::abs(std::arg(z) - k * step) - 2.0 * std::numbers::pi) > 1e-8)
    return out;
  const Cyclo unit = Cyclo::root_of_unity(k);
  if (auto r = approx_rational(mag, tol, kMaxDen)) out.push_back(Cyclo(*r) * unit);
  static const std::vector<std::pair<double, int>> radicals = {
      {std::sqrt(2.0), 2}, {std::sqrt(3.0), 3}, {std::sqrt(5.0), 5}, {std::sqrt(6.0), 6},
      {std::sqrt(10.0), 10}, {std::sqrt(15.0), 15}, {std::sqrt(30.0), 30}};
  for (const auto& [value, n] : radicals) {
    if (auto r = approx_rational(mag / value, tol / value, kMaxDen)) {
      auto s = sqrt_integer(n);
      if (s) out.push_back(Cyclo(*r) * *s * unit);
    }
  }
  return out;
}

namespace {

// Square root through the 32 complex embeddings w -> zeta^j, gcd(j, 120) = 1.
// sigma_{-j}(y) = conj(sigma_j(y)), so only the signs of 16 embeddings are free;
// each sign pattern determines the power basis coefficients of a candidate.
std::optional<Cyclo> sqrt_by_embeddings(const Cyclo& x) {
  struct Setup {
    std::vector<int> units;               // j < 60 with gcd(j, 120) = 1
    Eigen::MatrixXcd inverse;             // coefficients from embedding values
  };
  static const Setup setup = [] {
    Setup s;
    std::vector<int> all;
    for (int j = 1; j < Cyclo::kOrder; ++j)
      if (std::gcd(j, Cyclo::kOrder) == 1) all.push_back(j);
    for (int j : all)
      if (j < Cyclo::kOrder / 2) s.units.push_back(j);
    Eigen::MatrixXcd v(Cyclo::kDegree, Cyclo::kDegree);
    // rows 0..15: units j, rows 16..31: -j
    for (int r = 0; r < Cyclo::kDegree; ++r) {
      const int half = Cyclo::kDegree / 2;
      const int j = r < half ? s.units[static_cast<std::size_t>(r)] : Cyclo::kOrder - s.units[static_cast<std::size_t>(r - half)];
      for (int e = 0; e < Cyclo::kDegree; ++e)
        v(r, e) = std::polar(1.0, 2.0 * std::numbers::pi * ((static_cast<long>(j) * e) % Cyclo::kOrder) / Cyclo::kOrder);
    }
    s.inverse = v.inverse();
    return s;
  }();
  const int half = Cyclo::kDegree / 2;
  std::vector<std::complex<double>> root(static_cast<std::size_t>(half));
  double scale = 0.0;
  for (int r = 0; r < half; ++r) {
    std::complex<double> val = 0.0;
    const int j = setup.units[static_cast<std::size_t>(r)];
    for (const auto& t : x.terms())
      val += t.coeff.get_d() * std::polar(1.0, 2.0 * std::numbers::pi * ((static_cast<long>(j) * t.exp) % Cyclo::kOrder) / Cyclo::kOrder);
    root[static_cast<std::size_t>(r)] = std::sqrt(val);
    scale = std::max(scale, std::abs(root[static_cast<std::size_t>(r)]));
  }
  // contribution of pair r with sign +1
  Eigen::MatrixXcd contrib(Cyclo::kDegree, half);
  for (int r = 0; r < half; ++r)
    contrib.col(r) = setup.inverse.col(r) * root[static_cast<std::size_t>(r)] +
                     setup.inverse.col(r + half) * std::conj(root[static_cast<std::size_t>(r)]);
  Eigen::VectorXcd c = contrib.rowwise().sum();
  const double tol = 1e-9 * std::max(1.0, scale);
  constexpr long kMaxDen = 1000;
  // continued fraction in doubles, a cheap filter before the exact check
  auto near_rational = [&](double v) {
    double h0 = 1.0, h1 = std::floor(v), k0 = 0.0, k1 = 1.0, r = v - std::floor(v);
    while (true) {
      if (std::abs(v - h1 / k1) <= tol) return true;
      if (r < 1e-15) return false;
      r = 1.0 / r;
      const double a = std::floor(r);
      r -= a;
      const double h2 = a * h1 + h0, k2 = a * k1 + k0;
      if (k2 > kMaxDen) return false;
      h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    }
  };
  auto attempt = [&]() -> std::optional<Cyclo> {
    for (int e = 0; e < Cyclo::kDegree; ++e)
      if (!near_rational(c(e).real())) return std::nullopt;
    for (int e = 0; e < Cyclo::kDegree; ++e)
      if (!approx_rational(c(e).real(), tol, kMaxDen)) return std::nullopt;
    Cyclo y;
    for (int e = 0; e < Cyclo::kDegree; ++e) {
      const mpq_class q = *approx_rational(c(e).real(), tol, kMaxDen);
      if (sgn(q) != 0) y += Cyclo(q) * Cyclo::root_of_unity(e);
    }
    if (y * y == x) return y;
    return std::nullopt;
  };
  // Gray code over the signs of pairs 1..15; pair 0 fixed since -y is also a root
  std::vector<int> sign(static_cast<std::size_t>(half), 1);
  if (auto y = attempt()) return y;
  for (unsigned long g = 1; g < (1ul << (half - 1)); ++g) {
    const int bit = std::countr_zero(g) + 1;
    sign[static_cast<std::size_t>(bit)] = -sign[static_cast<std::size_t>(bit)];
    c += 2.0 * sign[static_cast<std::size_t>(bit)] * contrib.col(bit);
    if (auto y = attempt()) return y;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Cyclo> exact_sqrt(const Cyclo& x) {
  if (x.is_zero()) return Cyclo();
  const std::complex<double> z = x.approx();
  for (const auto& cand : recognize(std::sqrt(z)))
    if (cand * cand == x) return cand;
  // x = r w^k with r rational
  const double step = 2.0 * std::numbers::pi / Cyclo::kOrder;
  const long k0 = std::lround(std::arg(z) / step);
  for (long k : {k0, k0 + 60}) {
    const Cyclo y = x * Cyclo::root_of_unity(static_cast<int>(-k));
    auto r = y.as_rational();
    if (!r || sgn(*r) == 0) continue;
    long kk = mod_order(k);
    mpq_class rr = *r;
    if (sgn(rr) < 0) {
      rr = -rr;
      kk = mod_order(kk + 60);
    }
    if (kk % 2 != 0) continue;
    if (auto s = sqrt_rational(rr)) return *s * Cyclo::root_of_unity(static_cast<int>(kk / 2));
  }
  return sqrt_by_embeddings(x);
}

}  // namespace rootflow
