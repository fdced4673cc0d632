#include "rootflow/roots.hpp"

#include "rootflow/polycurve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rootflow {
namespace {

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
  return s;
}

Complex horner_derivative(const std::vector<Complex>& c, Complex z) {
  Complex s = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) s = s * z + static_cast<double>(k) * c[k];
  return s;
}

void trim(std::vector<Cyclo>& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

std::vector<Cyclo> derivative(const std::vector<Cyclo>& p) {
  std::vector<Cyclo> d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Cyclo(static_cast<long>(k)));
  trim(d);
  return d;
}

std::pair<std::vector<Cyclo>, std::vector<Cyclo>> divmod(std::vector<Cyclo> num, const std::vector<Cyclo>& den) {
  if (den.empty()) throw std::domain_error("polynomial division by zero");
  if (num.size() < den.size()) return {{}, num};
  const std::size_t dn = den.size() - 1;
  const Cyclo lead_inv = den.back().inverse();
  std::vector<Cyclo> q(num.size() - dn);
  for (std::size_t k = num.size() - den.size() + 1; k-- > 0;) {
    const Cyclo c = num[k + dn] * lead_inv;
    q[k] = c;
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[k + j] -= c * den[j];
  }
  num.resize(dn);
  trim(num);
  trim(q);
  return {q, num};
}

void make_monic(std::vector<Cyclo>& p) {
  if (p.empty()) return;
  const Cyclo inv = p.back().inverse();
  for (auto& c : p) c *= inv;
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
  if (c.empty()) throw PreconditionViolated("polynomial_roots: empty coefficient list");
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return {};
  if (n == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(n)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) throw DidNotConverge("companion eigenvalue iteration failed");
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = es.eigenvalues()(i);

  // One Aberth correction, kept per root only if it lowers the residual.
  std::vector<Complex> refined = z;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Complex pk = horner(c, z[k]);
    const Complex dk = horner_derivative(c, z[k]);
    if (pk == 0.0 || dk == 0.0) continue;
    const Complex w = pk / dk;
    Complex s = 0.0;
    bool coincident = false;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == k) continue;
      const Complex diff = z[k] - z[j];
      if (std::abs(diff) <= 1e-8 * std::max(1.0, std::abs(z[k]))) {
        coincident = true;
        break;
      }
      s += 1.0 / diff;
    }
    if (coincident) continue;
    const Complex cand = z[k] - w / (1.0 - w * s);
    if (std::isfinite(cand.real()) && std::isfinite(cand.imag()) && std::abs(horner(c, cand)) < std::abs(pk))
      refined[k] = cand;
  }
  return refined;
}

std::vector<Complex> roots_at(const std::vector<Complex>& a) {
  const std::size_t n = a.size();
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) c[n - j] = (j % 2 == 0) ? a[j - 1] : -a[j - 1];
  return polynomial_roots(c);
}

std::vector<Cyclo> exact_poly_divide(const std::vector<Cyclo>& num, const std::vector<Cyclo>& den) {
  auto [q, r] = divmod(num, den);
  if (!r.empty()) throw PreconditionViolated("exact_poly_divide: division leaves a remainder");
  return q;
}

std::vector<Cyclo> exact_poly_gcd(std::vector<Cyclo> a, std::vector<Cyclo> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  make_monic(a);
  return a;
}

Cyclo exact_poly_eval(const std::vector<Cyclo>& p, const Cyclo& z) {
  Cyclo s;
  for (std::size_t k = p.size(); k-- > 0;) s = s * z + p[k];
  return s;
}

std::vector<Cyclo> exact_polynomial_roots(const std::vector<Cyclo>& ascending) {
  std::vector<Cyclo> p = ascending;
  trim(p);
  if (p.empty()) throw PreconditionViolated("exact_polynomial_roots: zero polynomial");
  make_monic(p);
  if (p.size() == 1) return {};

  // Roots of the squarefree part are simple, so their float values are accurate
  // enough to be recognized.
  std::vector<Cyclo> g = exact_poly_gcd(p, derivative(p));
  std::vector<Cyclo> sqfree = g.size() > 1 ? exact_poly_divide(p, g) : p;
  make_monic(sqfree);

  std::vector<Cyclo> distinct;
  std::vector<Cyclo> rest = sqfree;
  std::vector<Complex> approx;
  for (const auto& c : rest) approx.push_back(c.approx());
  for (const auto& z : polynomial_roots(approx)) {
    if (rest.size() <= 1) break;
    for (const auto& cand : recognize(z)) {
      if (!exact_poly_eval(rest, cand).is_zero()) continue;
      distinct.push_back(cand);
      rest = exact_poly_divide(rest, {-cand, Cyclo(1)});
      break;
    }
  }
  if (rest.size() == 2) {
    distinct.push_back(-rest[0]);
  } else if (rest.size() == 3) {
    const Cyclo disc = rest[1] * rest[1] - Cyclo(4) * rest[0];
    auto sq = exact_sqrt(disc);
    if (!sq) throw NotRepresentable("quadratic factor with discriminant outside the exact field");
    const Cyclo half = Cyclo(mpq_class(1, 2));
    distinct.push_back((-rest[1] + *sq) * half);
    distinct.push_back((-rest[1] - *sq) * half);
  } else if (rest.size() > 3) {
    throw NotRepresentable("polynomial roots are not all recognizable in the exact field");
  }

  std::vector<Cyclo> roots;
  std::vector<Cyclo> q = p;
  for (const auto& r : distinct) {
    const std::vector<Cyclo> lin{-r, Cyclo(1)};
    while (q.size() > 1) {
      auto [quot, rem] = divmod(q, lin);
      if (!rem.empty()) break;
      q = std::move(quot);
      roots.push_back(r);
    }
  }
  if (roots.size() + 1 != p.size()) throw NotRepresentable("exact root multiplicities do not add up");
  std::stable_sort(roots.begin(), roots.end(),
                   [](const Cyclo& a, const Cyclo& b) { return lex_less(a.approx(), b.approx()); });
  return roots;
}

std::vector<std::vector<int>> single_linkage_clusters(const std::vector<Complex>& pts, double tol) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]) <= tol) {
        const int a = find(i), b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  std::vector<std::vector<int>> clusters;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return clusters;
}

template <>
ConstantRoots<Cyclo> constant_roots(const PolyCurve<Cyclo>& p, const Tolerances&) {
  ConstantRoots<Cyclo> out;
  out.roots = exact_polynomial_roots(p.constant_standard_ascending());
  for (int i = 0; i < static_cast<int>(out.roots.size()); ++i) {
    bool placed = false;
    for (auto& c : out.clusters)
      if (out.roots[static_cast<std::size_t>(c.front())] == out.roots[static_cast<std::size_t>(i)]) {
        c.push_back(i);
        placed = true;
        break;
      }
    if (!placed) out.clusters.push_back({i});
  }
  return out;
}

template <>
ConstantRoots<Complex> constant_roots(const PolyCurve<Complex>& p, const Tolerances& tol) {
  ConstantRoots<Complex> out;
  out.roots = polynomial_roots(p.constant_standard_ascending());
  std::stable_sort(out.roots.begin(), out.roots.end(), lex_less);
  double scale = 1.0;
  for (const auto& z : out.roots) scale = std::max(scale, std::abs(z));
  const double gap = std::max(std::sqrt(tol.eps), tol.cluster_tol) * scale;
  out.clusters = single_linkage_clusters(out.roots, gap);
  // A root of multiplicity m spreads by about eps^(1/m), which can exceed the
  // gap. The Bezoutiant rank of P(0) counts the distinct roots; merge the
  // closest clusters down to that count.
  const int distinct = distinct_root_count(PolyCurve<Complex>::constant(p.constant_part(), 0), tol.eps);
  while (static_cast<int>(out.clusters.size()) > distinct) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.clusters.size(); ++i)
      for (std::size_t j = i + 1; j < out.clusters.size(); ++j)
        for (int a : out.clusters[i])
          for (int b : out.clusters[j]) {
            const double d = std::abs(out.roots[static_cast<std::size_t>(a)] - out.roots[static_cast<std::size_t>(b)]);
            if (d < best) {
              best = d;
              bi = i;
              bj = j;
            }
          }
    auto& c = out.clusters[bi];
    c.insert(c.end(), out.clusters[bj].begin(), out.clusters[bj].end());
    std::sort(c.begin(), c.end());
    out.clusters.erase(out.clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return out;
}

}  // namespace rootflow
