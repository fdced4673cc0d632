#include "rootflow/desingularize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rootflow {

const char* to_string(TraceStep::Kind k) {
  switch (k) {
    case TraceStep::Kind::ImplicitLift: return "ImplicitLift";
    case TraceStep::Kind::Split: return "Split";
    case TraceStep::Kind::ShiftScale: return "ShiftScale";
  }
  return "?";
}

namespace {

template <class F>
using ZPoly = std::vector<F>;  // ascending powers of z

template <class F>
bool is_exact_zero(const F& x) {
  return ScalarTraits<F>::is_zero(x, 0.0);
}

template <class F>
ZPoly<F> zmul(const ZPoly<F>& a, const ZPoly<F>& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly<F> r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_exact_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!is_exact_zero(b[j])) r[i + j] += a[i] * b[j];
  }
  return r;
}

// remainder modulo a monic polynomial
template <class F>
ZPoly<F> zmod(ZPoly<F> a, const ZPoly<F>& monic) {
  const std::size_t d = monic.size() - 1;
  for (std::size_t k = a.size(); k-- > d;) {
    const F c = a[k];
    if (is_exact_zero(c)) continue;
    for (std::size_t j = 0; j <= d; ++j) a[k - d + j] -= c * monic[j];
  }
  a.resize(std::min(a.size(), d));
  a.resize(d);
  return a;
}

template <class F>
ZPoly<F> from_roots(const std::vector<F>& roots) {
  ZPoly<F> p{F(1)};
  for (const auto& r : roots) p = zmul(p, ZPoly<F>{-r, F(1)});
  return p;
}

// Gaussian elimination with largest-magnitude pivots.
template <class F>
std::vector<F> solve_linear(std::vector<std::vector<F>> a, std::vector<F> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    double best = 0.0;
    for (std::size_t r = col; r < n; ++r) {
      if (is_exact_zero(a[r][col])) continue;
      const double mag = ScalarTraits<F>::magnitude(a[r][col]);
      if (piv == n || mag > best) {
        piv = r;
        best = mag;
      }
      if constexpr (ScalarTraits<F>::exact) break;
    }
    if (piv == n) throw NoSplit("Bezout system is singular: the factors share a root");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const F inv = F(1) / a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_exact_zero(a[r][col])) continue;
      const F f = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<F> x(n);
  for (std::size_t r = n; r-- > 0;) {
    F s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

template <class F>
struct Bezout {
  ZPoly<F> s;  // deg < deg h
  ZPoly<F> t;  // deg < deg g
};

// s g + t h = 1 for coprime monic g, h.
template <class F>
Bezout<F> bezout(const ZPoly<F>& g, const ZPoly<F>& h, const Tolerances& tol) {
  const std::size_t n1 = g.size() - 1, n2 = h.size() - 1, n = n1 + n2;
  std::vector<std::vector<F>> a(n, std::vector<F>(n));
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t k = 0; k <= n1; ++k) a[i + k][i] = g[k];
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k <= n2; ++k) a[i + k][n2 + i] = h[k];
  if constexpr (!ScalarTraits<F>::exact) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[r][c];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > 1.0 / tol.eps)
      throw IllConditioned("Bezout system condition number exceeds 1/eps");
  }
  std::vector<F> rhs(n);
  rhs[0] = F(1);
  auto x = solve_linear(std::move(a), std::move(rhs));
  Bezout<F> r;
  r.s.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n2));
  r.t.assign(x.begin() + static_cast<std::ptrdiff_t>(n2), x.end());
  return r;
}

template <class F>
Jet<F> resized(const Jet<F>& j, int order) {
  if (order <= j.order()) return j.truncated(order);
  std::vector<F> c = j.coeffs();
  c.resize(static_cast<std::size_t>(order + 1));
  return Jet<F>(std::move(c), j.polynomial(), j.t0());
}

// h^p * f
template <class F>
Jet<F> shift_up(const Jet<F>& f, int p) {
  std::vector<F> c(static_cast<std::size_t>(p));
  c.insert(c.end(), f.coeffs().begin(), f.coeffs().end());
  return Jet<F>(std::move(c), f.polynomial(), f.t0());
}

// dP/dz evaluated at the jet z
template <class F>
Jet<F> evaluate_dz(const PolyCurve<F>& p, const Jet<F>& z) {
  const int n = p.degree();
  const int K = std::min(p.order(), z.order());
  Jet<F> r = Jet<F>::constant(F(n), K, z.t0());
  for (int j = 1; j < n; ++j) r = r * z + p.standard(j).truncated(K) * F(n - j);
  return r;
}

template <class F>
bool constant_in_h(const PolyCurve<F>& p) {
  for (const auto& c : p.coefficients())
    if (!c.polynomial() || c.degree() > 0) return false;
  return true;
}

// Zero decisions for a_k are measured against |roots|^k.
template <class F>
double coefficient_reference(const PolyCurve<F>& p, int k) {
  return std::pow(std::max(p.root_scale(), 1e-300), k);
}

template <class F>
ZPoly<F> constant_standard(const PolyCurve<F>& p) {
  return p.constant_standard_ascending();
}

}  // namespace

template <class F>
Jet<F> implicit_lift(const PolyCurve<F>& p, const F& z0, const Tolerances& tol) {
  const int K = p.order();
  const double t0 = p.t0();
  if (p.degree() == 1) return p.a(1);
  const ZPoly<F> c0 = constant_standard(p);
  F val{}, der{};
  for (std::size_t k = c0.size(); k-- > 0;) val = val * z0 + c0[k];
  for (std::size_t k = c0.size(); k-- > 1;) der = der * z0 + c0[k] * F(static_cast<long>(k));
  const double scale = std::max(1.0, std::pow(std::max(p.root_scale(), ScalarTraits<F>::magnitude(z0)), p.degree() - 1));
  if (ScalarTraits<F>::is_zero(der, tol.eps * scale * p.degree()))
    throw NotSimpleRoot("implicit_lift: derivative vanishes at the starting root");
  if (ScalarTraits<F>::exact && !is_exact_zero(val)) throw PreconditionViolated("implicit_lift: z0 is not a root of P(0)");
  if (!ScalarTraits<F>::exact && ScalarTraits<F>::magnitude(val) > std::sqrt(tol.eps) * scale * std::max(1.0, ScalarTraits<F>::magnitude(z0)))
    throw PreconditionViolated("implicit_lift: z0 is not a root of P(0)");

  Jet<F> lam = Jet<F>::constant(z0, 0, t0);
  if constexpr (!ScalarTraits<F>::exact) {
    // polish the constant term first
    for (int it = 0; it < 3; ++it) {
      F v{}, d{};
      for (std::size_t k = c0.size(); k-- > 0;) v = v * lam[0] + c0[k];
      for (std::size_t k = c0.size(); k-- > 1;) d = d * lam[0] + c0[k] * F(static_cast<long>(k));
      if (is_exact_zero(d)) break;
      lam[0] -= v / d;
    }
  }
  int have = 0;
  while (have < K) {
    const int next = std::min(2 * have + 1, K);
    lam = resized(lam, next);
    const PolyCurve<F> pk = p.truncated(next);
    const Jet<F> v = pk.evaluate(lam);
    const Jet<F> d = evaluate_dz(pk, lam);
    lam = lam - v * reciprocal(d, tol.eps);
    have = next;
  }
  lam = resized(lam, K);
  lam.set_polynomial(constant_in_h(p));
  lam.set_t0(t0);
  return lam;
}

template <class F>
SplitPair<F> split_roots(const PolyCurve<F>& p, const std::vector<F>& first, const std::vector<F>& second,
                         const Tolerances& tol) {
  const int n = p.degree();
  const int n1 = static_cast<int>(first.size()), n2 = static_cast<int>(second.size());
  if (n1 == 0 || n2 == 0 || n1 + n2 != n) throw NoSplit("split: both factors need at least one root");
  const int K = p.order();
  const double t0 = p.t0();

  ZPoly<F> g0 = from_roots(first), h0 = from_roots(second);
  Bezout<F> st = bezout(g0, h0, tol);
  if constexpr (!ScalarTraits<F>::exact) {
    // Newton refinement of the constant factorization P(0) = g0 h0
    const ZPoly<F> p0 = constant_standard(p);
    for (int it = 0; it < 3; ++it) {
      ZPoly<F> prod = zmul(g0, h0);
      ZPoly<F> r(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) r[static_cast<std::size_t>(k)] = p0[static_cast<std::size_t>(k)] - prod[static_cast<std::size_t>(k)];
      const ZPoly<F> dg = zmod(zmul(st.t, r), g0), dh = zmod(zmul(st.s, r), h0);
      for (int k = 0; k < n1; ++k) g0[static_cast<std::size_t>(k)] += dg[static_cast<std::size_t>(k)];
      for (int k = 0; k < n2; ++k) h0[static_cast<std::size_t>(k)] += dh[static_cast<std::size_t>(k)];
      st = bezout(g0, h0, tol);
    }
  }

  // P_m(z) for m >= 1, degree < n
  std::vector<ZPoly<F>> pm(static_cast<std::size_t>(K + 1), ZPoly<F>(static_cast<std::size_t>(n)));
  for (int j = 1; j <= n; ++j) {
    const Jet<F> c = p.standard(j);
    for (int m = 0; m <= K; ++m) pm[static_cast<std::size_t>(m)][static_cast<std::size_t>(n - j)] = c[m];
  }
  std::vector<ZPoly<F>> gm(static_cast<std::size_t>(K + 1)), hm(static_cast<std::size_t>(K + 1));
  gm[0] = ZPoly<F>(g0.begin(), g0.end() - 1);
  hm[0] = ZPoly<F>(h0.begin(), h0.end() - 1);
  for (int m = 1; m <= K; ++m) {
    ZPoly<F> e = pm[static_cast<std::size_t>(m)];
    for (int i = 1; i < m; ++i) {
      const ZPoly<F> prod = zmul(gm[static_cast<std::size_t>(i)], hm[static_cast<std::size_t>(m - i)]);
      for (std::size_t k = 0; k < prod.size(); ++k) e[k] -= prod[k];
    }
    gm[static_cast<std::size_t>(m)] = zmod(zmul(st.t, e), g0);
    hm[static_cast<std::size_t>(m)] = zmod(zmul(st.s, e), h0);
  }

  const bool poly = constant_in_h(p);
  auto assemble = [&](const std::vector<ZPoly<F>>& parts, int deg) {
    std::vector<Jet<F>> a;
    for (int j = 1; j <= deg; ++j) {
      Jet<F> c(K, t0, poly);
      for (int m = 0; m <= K; ++m) c[m] = parts[static_cast<std::size_t>(m)][static_cast<std::size_t>(deg - j)];
      a.push_back(j % 2 == 0 ? c : -c);
    }
    return PolyCurve<F>(std::move(a));
  };
  SplitPair<F> out{assemble(gm, n1), assemble(hm, n2), std::numeric_limits<double>::infinity()};
  for (const auto& x : first)
    for (const auto& y : second)
      out.gap = std::min(out.gap, std::abs(ScalarTraits<F>::approx(x) - ScalarTraits<F>::approx(y)));
  return out;
}

template <class F>
SplitPair<F> split(const PolyCurve<F>& p, const Tolerances& tol) {
  const auto cr = constant_roots(p, tol);
  if (cr.clusters.size() < 2) throw NoSplit("split: all roots of P(0) lie in one cluster");
  std::vector<F> first, second;
  for (std::size_t c = 0; c < cr.clusters.size(); ++c)
    for (int idx : cr.clusters[c]) (c == 0 ? first : second).push_back(cr.roots[static_cast<std::size_t>(idx)]);
  return split_roots(p, first, second, tol);
}

template <class F>
Tschirnhaus<F> tschirnhaus_reduce(const PolyCurve<F>& p, const Tolerances&) {
  const int n = p.degree();
  const int K = p.order();
  const double t0 = p.t0();
  Jet<F> s = p.a(1) * (F(1) / F(n));
  // standard coefficients c_i of z^i, c_n = 1
  std::vector<Jet<F>> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = Jet<F>::constant(F(1), K, t0);
  for (int j = 1; j <= n; ++j) c[static_cast<std::size_t>(n - j)] = p.standard(j);
  std::vector<Jet<F>> spow{Jet<F>::constant(F(1), K, t0)};
  for (int e = 1; e <= n; ++e) spow.push_back(spow.back() * s);
  std::vector<Jet<F>> q;
  for (int j = 1; j <= n; ++j) {
    const int k = n - j;  // coefficient of z^k in P(z + s)
    Jet<F> acc(K, t0, true);
    for (int i = k; i <= n; ++i)
      acc += c[static_cast<std::size_t>(i)] * spow[static_cast<std::size_t>(i - k)] * F(binomial(i, k));
    q.push_back(j % 2 == 0 ? acc : -acc);
  }
  q[0] = Jet<F>(K, t0, true);  // a_1 of the shifted curve vanishes identically
  return {PolyCurve<F>(std::move(q)), s};
}

template <class F>
std::optional<mpq_class> min_scaled_order(const PolyCurve<F>& p, const Tolerances& tol) {
  std::optional<mpq_class> best;
  std::vector<mpq_class> bounds;
  for (int k = 2; k <= p.degree(); ++k) {
    const auto ob = order_bound(p.a(k), tol.eps, coefficient_reference(p, k));
    if (ob.infinite) continue;
    const mpq_class v(ob.value, k);
    if (ob.exact) {
      if (!best || v < *best) best = v;
    } else {
      bounds.push_back(v);
    }
  }
  for (const auto& b : bounds)
    if (!best || b < *best)
      throw FlatCoefficient("a coefficient vanishes to the truncation order and decides the minimum");
  if (best) {
    mpq_class b = *best;
    b.canonicalize();
    return b;
  }
  return std::nullopt;
}

template <class F>
ScaleReduction<F> scale_reduce(const PolyCurve<F>& p, const Tolerances& tol) {
  const int n = p.degree();
  if (n < 2) throw PreconditionViolated("scale_reduce: degree must be at least 2");
  if (jet_order(p.a(1), tol.eps, coefficient_reference(p, 1)))
    throw PreconditionViolated("scale_reduce: a_1 must vanish");
  for (int k = 2; k <= n; ++k) {
    const Jet<F>& a = p.a(k);
    const double thr = ScalarTraits<F>::exact ? 0.0 : tol.eps * std::max(a.max_abs(), coefficient_reference(p, k));
    if (!ScalarTraits<F>::is_zero(a[0], thr)) throw PreconditionViolated("scale_reduce: roots of P(0) must all vanish");
  }
  const auto m = min_scaled_order(p, tol);
  if (!m) throw AllCoefficientsZero("scale_reduce: every coefficient vanishes identically");
  ScaleReduction<F> r;
  r.m = *m;
  mpz_class d;
  mpz_cdiv_q(d.get_mpz_t(), m->get_den().get_mpz_t(), m->get_num().get_mpz_t());
  r.d = static_cast<int>(d.get_si());
  const int K = p.order();
  const int out_order = r.d * K - n;
  if (out_order < 0) throw TruncationExhausted("scale_reduce: truncation order too small for degree " + std::to_string(n));
  for (int sign : {1, -1}) {
    std::vector<Jet<F>> a;
    a.push_back(Jet<F>(out_order, p.t0(), true));
    for (int k = 2; k <= n; ++k) {
      const Jet<F> composed = compose_power(p.a(k), r.d, sign);
      // coefficients below h^k vanish since d m(a_k) >= d m k >= k
      std::vector<F> c(composed.coeffs().begin() + k, composed.coeffs().end());
      a.push_back(Jet<F>(std::move(c), composed.polynomial(), p.t0()).truncated(out_order));
    }
    (sign > 0 ? r.plus : r.minus) = PolyCurve<F>(std::move(a));
  }
  return r;
}

namespace {

template <class F>
struct Solved {
  int N = 1;
  std::vector<Jet<F>> roots;
};

template <class F>
int largest_known_distinct(const BezoutiantData<F>& b, double eps) {
  for (int k = b.n; k >= 2; --k)
    if (jet_order(b.delta(k), eps, b.reference[static_cast<std::size_t>(k - 1)])) return k;
  return 1;
}

template <class F>
class Solver {
 public:
  Solver(const Tolerances& tol, std::vector<TraceStep>& trace) : tol_(tol), trace_(trace) {}

  Solved<F> solve(const PolyCurve<F>& p, int depth, std::optional<int> hint) {
    const int n = p.degree();
    if (depth > 64 * n + 64) throw TruncationExhausted("desingularize: recursion depth limit reached");
    const auto b = bezoutiant(p);
    const auto g = genericity_check(b, tol_.eps);
    std::optional<int> k = hint;
    if (g.generic()) k = g.k;
    if (!k)
      throw GenericityViolated("depth " + std::to_string(depth) + ": Delta_" + std::to_string(g.k) +
                               " vanishes to order K=" + std::to_string(g.truncation) + " with unknown tail");

    if (n == 1) {
      trace_.push_back(step(TraceStep::Kind::ImplicitLift, depth, n, "degree one"));
      return {1, {p.a(1)}};
    }
    const auto cr = constant_roots(p, tol_);
    if (cr.clusters.size() == cr.roots.size()) {
      trace_.push_back(step(TraceStep::Kind::ImplicitLift, depth, n, "simple roots"));
      Solved<F> s;
      for (const auto& z : cr.roots) s.roots.push_back(implicit_lift(p, z, tol_));
      return s;
    }
    if (cr.clusters.size() >= 2) return solve_split(p, cr, depth, k);
    return solve_single_cluster(p, depth, *k, g.generic());
  }

 private:
  TraceStep step(TraceStep::Kind kind, int depth, int degree, std::string note = {}) {
    TraceStep s;
    s.kind = kind;
    s.depth = depth;
    s.degree = degree;
    s.note = std::move(note);
    return s;
  }

  Solved<F> solve_split(const PolyCurve<F>& p, const ConstantRoots<F>& cr, int depth, std::optional<int> k) {
    std::vector<F> first, second;
    for (std::size_t c = 0; c < cr.clusters.size(); ++c)
      for (int idx : cr.clusters[c]) (c == 0 ? first : second).push_back(cr.roots[static_cast<std::size_t>(idx)]);
    const SplitPair<F> sp = split_roots(p, first, second, tol_);
    TraceStep st = step(TraceStep::Kind::Split, depth, p.degree());
    st.degree1 = sp.p1.degree();
    st.degree2 = sp.p2.degree();
    st.gap = sp.gap;
    trace_.push_back(st);

    // distinct root germs add up over the two factors
    const auto b1 = bezoutiant(sp.p1), b2 = bezoutiant(sp.p2);
    const auto g1 = genericity_check(b1, tol_.eps), g2 = genericity_check(b2, tol_.eps);
    std::optional<int> k1, k2;
    if (g1.generic()) k1 = g1.k;
    if (g2.generic()) k2 = g2.k;
    if (k) {
      if (k1 && !k2) k2 = *k - *k1;
      else if (k2 && !k1) k1 = *k - *k2;
      else if (!k1 && !k2) {
        const int l1 = largest_known_distinct(b1, tol_.eps), l2 = largest_known_distinct(b2, tol_.eps);
        if (l1 + l2 == *k) {
          k1 = l1;
          k2 = l2;
        }
      }
    }
    const Solved<F> s1 = solve(sp.p1, depth + 1, k1);
    const Solved<F> s2 = solve(sp.p2, depth + 1, k2);
    Solved<F> out;
    out.N = s1.N * s2.N;
    for (const auto& r : s1.roots) out.roots.push_back(compose_power(r, s2.N, 1));
    for (const auto& r : s2.roots) out.roots.push_back(compose_power(r, s1.N, 1));
    return out;
  }

  Solved<F> solve_single_cluster(const PolyCurve<F>& p, int depth, int k, bool k_certified) {
    const int n = p.degree();
    auto ts = tschirnhaus_reduce(p, tol_);
    PolyCurve<F> q = ts.reduced;
    if constexpr (!ScalarTraits<F>::exact) {
      // a single cluster collapses to 0 after the shift
      for (int j = 2; j <= n; ++j) q.a(j)[0] = F(0);
    }
    auto coincident = [&](const char* note) {
      trace_.push_back(step(TraceStep::Kind::ImplicitLift, depth, n, note));
      return Solved<F>{1, std::vector<Jet<F>>(static_cast<std::size_t>(n), ts.shift)};
    };
    if (k == 1) return coincident("all roots coincide");

    std::optional<mpq_class> m;
    try {
      m = min_scaled_order(q, tol_);
    } catch (const FlatCoefficient& e) {
      if (k_certified || k >= 2)
        throw TruncationExhausted("depth " + std::to_string(depth) + ": " + e.what() +
                                  "; increase the truncation order");
      throw GenericityViolated("depth " + std::to_string(depth) + ": " + e.what());
    }
    if (!m) return coincident("shifted coefficients vanish identically");

    const ScaleReduction<F> sr = scale_reduce(q, tol_);
    TraceStep st = step(TraceStep::Kind::ShiftScale, depth, n);
    st.m = sr.m;
    st.d = sr.d;
    st.m_tilde = sr.d * sr.m - 1;
    st.m_tilde.canonicalize();
    if (!(st.m_tilde < st.m)) throw std::logic_error("desingularize: m_tilde = d m - 1 must decrease");
    try {
      if (auto mt = min_scaled_order(sr.plus, tol_)) {
        if (*mt != st.m_tilde) throw std::logic_error("desingularize: m_tilde differs from d m - 1");
      }
    } catch (const FlatCoefficient&) {
      // orders of the rescaled coefficients are only bounded below; checked in the recursion
    }
    trace_.push_back(st);

    const Solved<F> inner = solve(sr.plus, depth + 1, k);
    Solved<F> out;
    out.N = sr.d * inner.N;
    const Jet<F> shift = compose_power(ts.shift, out.N, 1);
    for (const auto& mu : inner.roots) {
      Jet<F> lam = shift_up(mu, inner.N);
      out.roots.push_back(lam + shift);
    }
    return out;
  }

  const Tolerances& tol_;
  std::vector<TraceStep>& trace_;
};

}  // namespace

template <class F>
DesingularizationResult<F> desingularize_branch(const PolyCurve<F>& p, int sign, const Tolerances& tol) {
  if (sign != 1 && sign != -1) throw PreconditionViolated("desingularize: sign must be +1 or -1");
  const auto g = genericity_check(p, tol.eps);
  if (!g.generic())
    throw GenericityViolated("Delta_" + std::to_string(g.k) + " vanishes to order K=" + std::to_string(g.truncation) +
                             " with unknown tail");
  const PolyCurve<F> pb = sign > 0 ? p : p.compose_power(1, -1);
  DesingularizationResult<F> r;
  r.branch = sign;
  Solver<F> solver(tol, r.trace);
  Solved<F> s;
  try {
    s = solver.solve(pb, 0, g.k);
  } catch (const AllCoefficientsZero& e) {
    throw TruncationExhausted(e.what());
  } catch (const FlatCoefficient& e) {
    throw GenericityViolated(e.what());
  }
  r.N = s.N;
  r.roots = std::move(s.roots);
  for (auto& j : r.roots) j.set_t0(p.t0());
  return r;
}

template <class F>
DesingularizationPair<F> desingularize(const PolyCurve<F>& p, const Tolerances& tol) {
  return {desingularize_branch(p, 1, tol), desingularize_branch(p, -1, tol)};
}

template <class F>
std::vector<Jet<F>> residual(const PolyCurve<F>& p, const DesingularizationResult<F>& r) {
  const PolyCurve<F> pc = p.compose_power(r.N, r.branch);
  std::vector<Jet<F>> out;
  for (const auto& lam : r.roots) out.push_back(pc.evaluate(lam));
  return out;
}

template <class F>
std::vector<PolyCurve<F>> cluster_factors(const PolyCurve<F>& p, const Tolerances& tol) {
  std::vector<PolyCurve<F>> out;
  PolyCurve<F> rest = p;
  while (true) {
    const auto cr = constant_roots(rest, tol);
    if (cr.clusters.size() < 2) {
      out.push_back(rest);
      return out;
    }
    std::vector<F> first, second;
    for (std::size_t c = 0; c < cr.clusters.size(); ++c)
      for (int idx : cr.clusters[c]) (c == 0 ? first : second).push_back(cr.roots[static_cast<std::size_t>(idx)]);
    auto sp = split_roots(rest, first, second, tol);
    out.push_back(std::move(sp.p1));
    rest = std::move(sp.p2);
  }
}

template <class F>
DifferentiabilityReport differentiable_test(const PolyCurve<F>& p, const Tolerances& tol) {
  DifferentiabilityReport rep;
  const auto factors = cluster_factors(p, tol);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    rep.factor_degrees.push_back(f.degree());
    if (f.degree() < 2) continue;
    const auto b = bezoutiant(f);
    for (int k = 2; k <= f.degree(); ++k) {
      DifferentiabilityEntry e;
      e.factor = static_cast<int>(i);
      e.k = k;
      e.required = k * (k - 1);
      const auto ob = order_bound(b.delta(k), tol.eps, b.reference[static_cast<std::size_t>(k - 1)]);
      e.order = ob.value;
      e.bounded_below = !ob.exact;
      e.infinite = ob.infinite;
      const auto ok = ob.at_least(e.required);
      if (!ok)
        throw UndeterminedOrder("Delta_" + std::to_string(k) + " of cluster factor " + std::to_string(i) +
                                " vanishes to order " + std::to_string(f.order()) + " < " +
                                std::to_string(e.required) + " with unknown tail");
      e.ok = *ok;
      rep.entries.push_back(e);
      if (!e.ok && rep.ok) {
        rep.ok = false;
        rep.failure = e;
      }
    }
  }
  return rep;
}

template <class F>
LocalRoots differentiable_roots_local(const PolyCurve<F>& p, const std::vector<double>& grid, const Tolerances& tol) {
  if (grid.size() < 2) throw PreconditionViolated("differentiable_roots_local: need at least two grid points");
  const auto rep = differentiable_test(p, tol);
  if (!rep.ok) throw PreconditionViolated("differentiable_roots_local: the differentiability test fails");
  const double t0 = p.t0();
  LocalRoots out;
  out.grid = grid;
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - t0) < std::abs(grid[i0] - t0)) i0 = i;

  for (const auto& f : cluster_factors(p, tol)) {
    auto ts = tschirnhaus_reduce(f, tol);
    PolyCurve<F> q = ts.reduced;
    const int n = f.degree();
    const Jet<F>& s = ts.shift;
    const Complex ds = s.order() >= 1 ? ScalarTraits<F>::approx(s[1]) : Complex(0.0);
    if (n == 1) {
      std::vector<Complex> path;
      for (double t : grid) path.push_back(s.eval(t - t0));
      out.paths.push_back(std::move(path));
      out.derivative.push_back(ds);
      continue;
    }
    std::vector<FloatJet> reduced;
    for (int k = 2; k <= n; ++k) {
      Jet<F> a = q.a(k);
      if constexpr (!ScalarTraits<F>::exact) a[0] = F(0);
      const auto m = jet_order(a, tol.eps, coefficient_reference(q, k));
      if (m && *m < k) throw OrderTooLow("differentiable_roots_local: m(a_" + std::to_string(k) + ") < " + std::to_string(k));
      if (k > a.order()) throw TruncationExhausted("differentiable_roots_local: truncation order below the degree");
      std::vector<Complex> c;
      for (int j = k; j <= a.order(); ++j) c.push_back(ScalarTraits<F>::approx(a[j]));
      reduced.emplace_back(std::move(c), false, t0);
    }
    std::vector<std::vector<Complex>> samples;
    for (double t : grid) {
      std::vector<Complex> a{Complex(0.0)};
      for (const auto& r : reduced) a.push_back(r.eval(t - t0));
      samples.push_back(std::move(a));
    }
    const RootPaths mu = track(grid, samples, tol.eps);
    std::vector<Complex> at0{Complex(0.0)};
    for (const auto& r : reduced) at0.push_back(r.eval(0.0));
    const auto mu0 = roots_at(at0);
    std::vector<Complex> mu_at_i0;
    for (const auto& path : mu.paths) mu_at_i0.push_back(path[i0]);
    const auto match = match_step(mu_at_i0, mu0);
    for (int j = 0; j < n; ++j) {
      std::vector<Complex> path;
      for (std::size_t i = 0; i < grid.size(); ++i)
        path.push_back((grid[i] - t0) * mu.paths[static_cast<std::size_t>(j)][i] + s.eval(grid[i] - t0));
      out.paths.push_back(std::move(path));
      out.derivative.push_back(mu0[static_cast<std::size_t>(match.perm[static_cast<std::size_t>(j)])] + ds);
    }
  }
  const std::size_t i1 = i0 + 1 < grid.size() ? i0 + 1 : i0 - 1;
  for (const auto& path : out.paths) out.difference_quotient.push_back((path[i1] - path[i0]) / (grid[i1] - grid[i0]));
  return out;
}

#define ROOTFLOW_INSTANTIATE(F)                                                                                 \
  template Jet<F> implicit_lift(const PolyCurve<F>&, const F&, const Tolerances&);                              \
  template SplitPair<F> split_roots(const PolyCurve<F>&, const std::vector<F>&, const std::vector<F>&,          \
                                    const Tolerances&);                                                         \
  template SplitPair<F> split(const PolyCurve<F>&, const Tolerances&);                                          \
  template Tschirnhaus<F> tschirnhaus_reduce(const PolyCurve<F>&, const Tolerances&);                           \
  template std::optional<mpq_class> min_scaled_order(const PolyCurve<F>&, const Tolerances&);                   \
  template ScaleReduction<F> scale_reduce(const PolyCurve<F>&, const Tolerances&);                              \
  template DesingularizationResult<F> desingularize_branch(const PolyCurve<F>&, int, const Tolerances&);        \
  template DesingularizationPair<F> desingularize(const PolyCurve<F>&, const Tolerances&);                      \
  template std::vector<Jet<F>> residual(const PolyCurve<F>&, const DesingularizationResult<F>&);                \
  template std::vector<PolyCurve<F>> cluster_factors(const PolyCurve<F>&, const Tolerances&);                   \
  template DifferentiabilityReport differentiable_test(const PolyCurve<F>&, const Tolerances&);                 \
  template LocalRoots differentiable_roots_local(const PolyCurve<F>&, const std::vector<double>&,               \
                                                 const Tolerances&);

ROOTFLOW_INSTANTIATE(Cyclo)
ROOTFLOW_INSTANTIATE(Complex)

#undef ROOTFLOW_INSTANTIATE

}  // namespace rootflow
