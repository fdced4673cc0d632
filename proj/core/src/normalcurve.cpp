#include "rootflow/normalcurve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

namespace rootflow {

template <class F>
MatrixCurve<F>::MatrixCurve(int n, std::vector<Jet<F>> entries) : n_(n), e_(std::move(entries)) {
  if (n < 1 || e_.size() != static_cast<std::size_t>(n * n))
    throw PreconditionViolated("matrix curve needs n*n entries with n >= 1");
  const int K = order();
  for (auto& x : e_) x = x.truncated(K);
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::zero(int n, int order, double t0) {
  return MatrixCurve(n, std::vector<Jet<F>>(static_cast<std::size_t>(n * n), Jet<F>(order, t0, true)));
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::identity(int n, int order, double t0) {
  MatrixCurve m = zero(n, order, t0);
  for (int i = 0; i < n; ++i) m(i, i) = Jet<F>::constant(F(1), order, t0);
  return m;
}

template <class F>
int MatrixCurve<F>::order() const {
  int K = e_.front().order();
  for (const auto& x : e_) K = std::min(K, x.order());
  return K;
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::adjoint() const {
  MatrixCurve r = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i).conj();
  return r;
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::compose_power(int d, int sign) const {
  std::vector<Jet<F>> e;
  for (const auto& x : e_) e.push_back(rootflow::compose_power(x, d, sign));
  return MatrixCurve(n_, std::move(e));
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::truncated(int order) const {
  std::vector<Jet<F>> e;
  for (const auto& x : e_) e.push_back(x.truncated(order));
  return MatrixCurve(n_, std::move(e));
}

template <class F>
double MatrixCurve<F>::max_abs() const {
  double m = 0.0;
  for (const auto& x : e_) m = std::max(m, x.max_abs());
  return m;
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::multiply(const MatrixCurve& b) const {
  if (b.n_ != n_) throw PreconditionViolated("matrix product: dimensions differ");
  const int K = std::min(order(), b.order());
  MatrixCurve r = zero(n_, K, t0());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Jet<F> acc(K, t0(), true);
      for (int k = 0; k < n_; ++k) acc += (*this)(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

template <class F>
MatrixCurve<F> MatrixCurve<F>::add(const MatrixCurve& b, int sign) const {
  if (b.n_ != n_) throw PreconditionViolated("matrix sum: dimensions differ");
  std::vector<Jet<F>> e;
  for (std::size_t q = 0; q < e_.size(); ++q) e.push_back(sign > 0 ? e_[q] + b.e_[q] : e_[q] - b.e_[q]);
  return MatrixCurve(n_, std::move(e));
}

namespace {

// Coefficients c_0 = 1, c_1, ..., c_n of det(z I - A), division free.
template <class T, class At>
std::vector<T> berkowitz(int n, const At& at, const T& zero, const T& one) {
  std::vector<T> p{one};
  for (int k = 0; k < n; ++k) {
    // column C = A[0..k-1][k], row R = A[k][0..k-1], leading block M = A[0..k-1][0..k-1]
    std::vector<T> q{one, zero - at(k, k)};
    std::vector<T> v(static_cast<std::size_t>(k), zero);
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = at(i, k);
    for (int j = 1; j <= k; ++j) {
      T rv = zero;
      for (int i = 0; i < k; ++i) rv = rv + at(k, i) * v[static_cast<std::size_t>(i)];
      q.push_back(zero - rv);
      if (j == k) break;
      std::vector<T> w(static_cast<std::size_t>(k), zero);
      for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l) w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] + at(i, l) * v[static_cast<std::size_t>(l)];
      v = std::move(w);
    }
    std::vector<T> np(static_cast<std::size_t>(k + 2), zero);
    for (int i = 0; i <= k + 1; ++i)
      for (int j = 0; j <= i && j < static_cast<int>(q.size()); ++j)
        if (i - j <= k) np[static_cast<std::size_t>(i)] = np[static_cast<std::size_t>(i)] + q[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(i - j)];
    p = std::move(np);
  }
  return p;
}

template <class F>
JetVector<F> scaled(const JetVector<F>& v, const F& c) {
  JetVector<F> r;
  for (const auto& x : v) r.push_back(x * c);
  return r;
}

template <class F>
JetVector<F> minus(const JetVector<F>& a, const JetVector<F>& b) {
  JetVector<F> r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

template <class F>
F inner0(const JetVector<F>& u, const JetVector<F>& v) {
  F s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += ScalarTraits<F>::conj(u[i][0]) * v[i][0];
  return s;
}

template <class F>
F inverse_sqrt(const F& x, const char* what) {
  const auto r = ScalarTraits<F>::sqrt(x);
  if (!r || ScalarTraits<F>::is_zero(*r, 0.0))
    throw NotRepresentable(std::string(what) + " needs a square root outside the exact field");
  return F(1) / *r;
}

template <class F>
bool same_jet(const Jet<F>& a, const Jet<F>& b, double eps) {
  const int K = std::min(a.order(), b.order());
  if constexpr (ScalarTraits<F>::exact) {
    for (int m = 0; m <= K; ++m)
      if (a[m] != b[m]) return false;
    return true;
  } else {
    const double thr = std::sqrt(eps) * std::max({1.0, a.max_abs(), b.max_abs()});
    for (int m = 0; m <= K; ++m)
      if (std::abs(a[m] - b[m]) > thr) return false;
    return true;
  }
}

template <class F>
bool same_value(const F& a, const F& b, double tol) {
  if constexpr (ScalarTraits<F>::exact) return a == b;
  else return std::abs(a - b) <= tol;
}

template <class F>
int distinct_jets(const std::vector<Jet<F>>& v, double eps) {
  int count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = same_jet(v[i], v[j], eps);
    if (!seen) ++count;
  }
  return count;
}

template <class F>
struct Sub {
  int N = 1;
  std::vector<Jet<F>> values;
  std::vector<JetVector<F>> vectors;
};

template <class F>
JetVector<F> compose_vector(const JetVector<F>& v, int d) {
  JetVector<F> r;
  for (const auto& x : v) r.push_back(compose_power(x, d, 1));
  return r;
}

template <class F>
class EigenSolver {
 public:
  EigenSolver(const Tolerances& tol, std::vector<EigenStep>& trace) : tol_(tol), trace_(trace) {}

  Sub<F> solve(const MatrixCurve<F>& a, int depth, std::optional<int> distinct) {
    const int n = a.dim();
    if (depth > 64 * n + 64) throw TruncationExhausted("eigen_desingularize: recursion depth limit reached");
    if (n == 1) {
      Sub<F> s;
      s.values.push_back(a(0, 0));
      s.vectors.push_back({Jet<F>::constant(F(1), a.order(), a.t0())});
      return s;
    }
    const PolyCurve<F> chi = char_poly(a);
    const auto g = genericity_check(chi, tol_.eps);
    if (g.generic()) distinct = g.k;
    const auto cr = constant_roots(chi, tol_);
    if (cr.clusters.size() >= 2) return step_a(a, chi, depth, distinct);
    return step_b(a, depth, distinct);
  }

 private:
  void note(const char* kind, int depth, int dim, int N, int m, std::string text = {}) {
    trace_.push_back(EigenStep{kind, depth, dim, N, m, std::move(text)});
  }

  Sub<F> step_a(const MatrixCurve<F>& a, const PolyCurve<F>& chi, int depth, std::optional<int> distinct) {
    const int n = a.dim();
    if (!distinct) throw GenericityViolated("characteristic polynomial has undetermined genericity");
    DesingularizationResult<F> d;
    try {
      d = desingularize_branch(chi, 1, tol_);
    } catch (const GenericityViolated&) {
      throw;
    }
    note("eigenvalues", depth, n, d.N, 0, "char poly desingularized");
    const MatrixCurve<F> a0 = a.compose_power(d.N, 1);

    // group eigenvalue jets by their value at 0
    double scale = 1.0;
    for (const auto& mu : d.roots) scale = std::max(scale, ScalarTraits<F>::magnitude(mu[0]));
    const double gtol = std::max(std::sqrt(tol_.eps), tol_.cluster_tol) * scale;
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
      bool placed = false;
      for (auto& grp : groups)
        if (same_value(d.roots[static_cast<std::size_t>(grp.front())][0], d.roots[static_cast<std::size_t>(i)][0], gtol)) {
          grp.push_back(i);
          placed = true;
          break;
        }
      if (!placed) groups.push_back({i});
    }

    std::vector<Sub<F>> subs;
    std::vector<FrameBundle<F>> frames;
    for (const auto& grp : groups) {
      int K = a0.order();
      for (int i : grp) K = std::min(K, d.roots[static_cast<std::size_t>(i)].order());
      const MatrixCurve<F> a0k = a0.truncated(K);
      MatrixCurve<F> b = MatrixCurve<F>::identity(n, K, a.t0());
      for (int i : grp) {
        MatrixCurve<F> shifted = a0k;
        const Jet<F> mu = d.roots[static_cast<std::size_t>(i)].truncated(K);
        for (int r = 0; r < n; ++r) shifted(r, r) = shifted(r, r) - mu;
        b = b * shifted;
      }
      FrameBundle<F> fr = kernel_frame(b, tol_.eps);
      if (fr.basis.size() != grp.size())
        throw RankDrop("kernel dimension " + std::to_string(fr.basis.size()) + " differs from multiplicity " +
                       std::to_string(grp.size()));
      const int r = static_cast<int>(grp.size());
      note("group", depth, r, 1, 0);
      // X = (A0 F) restricted to the free coordinates, where F is the identity
      std::vector<Jet<F>> x;
      for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) {
          Jet<F> acc(K, a.t0(), true);
          for (int l = 0; l < n; ++l) acc += a0k(fr.free[static_cast<std::size_t>(p)], l) * fr.basis[static_cast<std::size_t>(q)][static_cast<std::size_t>(l)];
          x.push_back(acc);
        }
      std::vector<Jet<F>> mus;
      for (int i : grp) mus.push_back(d.roots[static_cast<std::size_t>(i)]);
      subs.push_back(solve(MatrixCurve<F>(r, std::move(x)), depth + 1, distinct_jets(mus, tol_.eps)));
      frames.push_back(std::move(fr));
    }

    Sub<F> out;
    out.N = d.N;
    for (const auto& s : subs) out.N *= s.N;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const Sub<F>& s = subs[gi];
      int other = 1;
      for (std::size_t gj = 0; gj < groups.size(); ++gj)
        if (gj != gi) other *= subs[gj].N;
      std::vector<JetVector<F>> basis;
      for (const auto& v : frames[gi].basis) basis.push_back(compose_vector(v, s.N));
      for (std::size_t j = 0; j < s.values.size(); ++j) {
        out.values.push_back(compose_power(s.values[j], other, 1));
        // frame vectors combined with the coordinates of the sub-eigenvector
        const JetVector<F>& c = s.vectors[j];
        int K = c.front().order();
        for (const auto& bv : basis) K = std::min(K, bv.front().order());
        JetVector<F> v(static_cast<std::size_t>(n), Jet<F>(K, a.t0(), true));
        for (std::size_t q = 0; q < basis.size(); ++q)
          for (int l = 0; l < n; ++l) v[static_cast<std::size_t>(l)] += basis[q][static_cast<std::size_t>(l)].truncated(K) * c[q].truncated(K);
        out.vectors.push_back(compose_vector(v, other));
      }
    }
    return out;
  }

  Sub<F> step_b(const MatrixCurve<F>& a, int depth, std::optional<int> distinct) {
    const int n = a.dim();
    const int K = a.order();
    Jet<F> tr(K, a.t0(), true);
    for (int i = 0; i < n; ++i) tr += a(i, i);
    const Jet<F> s = tr * (F(1) / F(n));
    MatrixCurve<F> b = a;
    for (int i = 0; i < n; ++i) b(i, i) = b(i, i) - s;
    if constexpr (!ScalarTraits<F>::exact) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j)[0] = F(0);
    }
    auto constant_vectors = [&](const char* why) {
      note("constant", depth, n, 1, 0, why);
      Sub<F> out;
      for (int i = 0; i < n; ++i) {
        out.values.push_back(s);
        JetVector<F> v(static_cast<std::size_t>(n), Jet<F>(K, a.t0(), true));
        v[static_cast<std::size_t>(i)] = Jet<F>::constant(F(1), K, a.t0());
        out.vectors.push_back(std::move(v));
      }
      return out;
    };
    bool all_zero = true;
    for (const auto& e : b.entries()) all_zero = all_zero && e.identically_zero();
    if (all_zero) return constant_vectors("shifted matrix vanishes identically");
    if (distinct && *distinct == 1) return constant_vectors("single eigenvalue germ");

    // m = min entry order
    const double ref = std::max(b.max_abs(), 1e-300);
    std::optional<int> m;
    int bound = -1;
    for (const auto& e : b.entries()) {
      const auto ob = order_bound(e, tol_.eps, ref);
      if (ob.infinite) continue;
      if (ob.exact) m = m ? std::min(*m, ob.value) : ob.value;
      else bound = bound < 0 ? ob.value : std::min(bound, ob.value);
    }
    if (!m || (bound >= 0 && bound < *m)) {
      if (distinct) throw TruncationExhausted("matrix entries vanish to the truncation order; increase it");
      throw GenericityViolated("matrix entries vanish to the truncation order with unknown tail");
    }
    std::vector<Jet<F>> e;
    for (const auto& x : b.entries()) {
      std::vector<F> c(x.coeffs().begin() + *m, x.coeffs().end());
      e.push_back(Jet<F>(std::move(c), x.polynomial(), x.t0()));
    }
    note("shift", depth, n, 1, 0, "subtract trace / n");
    note("rescale", depth, n, 1, *m);
    const Sub<F> inner = solve(MatrixCurve<F>(n, std::move(e)), depth + 1, distinct);
    Sub<F> out;
    out.N = inner.N;
    const Jet<F> shift = compose_power(s, inner.N, 1);
    const int p = *m * inner.N;
    for (const auto& nu : inner.values) {
      std::vector<F> c(static_cast<std::size_t>(p));
      c.insert(c.end(), nu.coeffs().begin(), nu.coeffs().end());
      out.values.push_back(Jet<F>(std::move(c), nu.polynomial(), nu.t0()) + shift);
    }
    out.vectors = inner.vectors;
    return out;
  }

  const Tolerances& tol_;
  std::vector<EigenStep>& trace_;
};

}  // namespace

template <class F>
bool normality_check(const MatrixCurve<F>& a, double eps) {
  const MatrixCurve<F> as = a.adjoint();
  const MatrixCurve<F> c = a * as - as * a;
  if constexpr (ScalarTraits<F>::exact) {
    for (const auto& e : c.entries())
      if (!e.is_zero()) return false;
    return true;
  } else {
    const double s = std::max(a.max_abs(), 1e-300);
    return c.max_abs() <= eps * s * s * a.dim();
  }
}

template <class F>
PolyCurve<F> char_poly(const MatrixCurve<F>& a) {
  const int n = a.dim();
  const int K = a.order();
  const Jet<F> zero(K, a.t0(), true), one = Jet<F>::constant(F(1), K, a.t0());
  const auto c = berkowitz<Jet<F>>(n, [&](int i, int j) -> const Jet<F>& { return a(i, j); }, zero, one);
  std::vector<Jet<F>> std_coeffs(c.begin() + 1, c.end());
  return PolyCurve<F>::from_standard(std_coeffs);
}

std::vector<Complex> char_poly_values(const std::vector<std::vector<Complex>>& m) {
  const int n = static_cast<int>(m.size());
  const auto c = berkowitz<Complex>(
      n, [&](int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }, Complex(0.0),
      Complex(1.0));
  std::vector<Complex> a;
  for (int j = 1; j <= n; ++j) a.push_back(j % 2 == 0 ? c[static_cast<std::size_t>(j)] : -c[static_cast<std::size_t>(j)]);
  return a;
}

template <class F>
Genericity matrix_genericity_check(const MatrixCurve<F>& a, double eps) {
  return genericity_check(char_poly(a), eps);
}

template <class F>
FrameBundle<F> kernel_frame(const MatrixCurve<F>& b, double eps) {
  const int n = b.dim();
  std::vector<std::vector<Jet<F>>> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)].push_back(b(i, j));
  double scale0 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale0 = std::max(scale0, ScalarTraits<F>::magnitude(b(i, j)[0]));
  const double pivot_thr = ScalarTraits<F>::exact ? 0.0 : std::sqrt(eps) * std::max(1.0, scale0);

  FrameBundle<F> fr;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> pivot_row(static_cast<std::size_t>(n), -1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    double best = 0.0;
    for (int r = 0; r < n; ++r) {
      if (used[static_cast<std::size_t>(r)]) continue;
      const F& x = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)][0];
      if (ScalarTraits<F>::is_zero(x, pivot_thr)) continue;
      const double mag = ScalarTraits<F>::magnitude(x);
      if (piv < 0 || mag > best) {
        piv = r;
        best = mag;
      }
      if constexpr (ScalarTraits<F>::exact) break;
    }
    if (piv < 0) {
      fr.free.push_back(c);
      continue;
    }
    used[static_cast<std::size_t>(piv)] = 1;
    pivot_row[static_cast<std::size_t>(c)] = piv;
    fr.pivots.push_back(c);
    auto& row = m[static_cast<std::size_t>(piv)];
    const Jet<F> inv = reciprocal(row[static_cast<std::size_t>(c)], eps);
    for (auto& x : row) x = x * inv;
    for (int r = 0; r < n; ++r) {
      if (r == piv) continue;
      const Jet<F> f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * row[static_cast<std::size_t>(j)];
    }
  }
  // rows without pivots must vanish for the rank to stay constant
  double scale = 1.0;
  for (const auto& e : b.entries()) scale = std::max(scale, e.max_abs());
  const double zero_thr = ScalarTraits<F>::exact ? 0.0 : std::sqrt(eps) * scale;
  for (int r = 0; r < n; ++r) {
    if (used[static_cast<std::size_t>(r)]) continue;
    for (const auto& x : m[static_cast<std::size_t>(r)]) {
      if constexpr (ScalarTraits<F>::exact) {
        if (!x.is_zero()) throw RankDrop("kernel_frame: rank grows away from h = 0");
      } else {
        if (x.max_abs() > zero_thr) throw RankDrop("kernel_frame: rank grows away from h = 0");
      }
    }
  }
  const int K = b.order();
  for (int f : fr.free) {
    JetVector<F> v(static_cast<std::size_t>(n), Jet<F>(K, b.t0(), true));
    v[static_cast<std::size_t>(f)] = Jet<F>::constant(F(1), K, b.t0());
    for (int c : fr.pivots)
      v[static_cast<std::size_t>(c)] = -m[static_cast<std::size_t>(pivot_row[static_cast<std::size_t>(c)])][static_cast<std::size_t>(f)];
    fr.basis.push_back(std::move(v));
  }
  return fr;
}

template <class F>
EigenResult<F> eigen_desingularize_branch(const MatrixCurve<F>& a, int sign, const Tolerances& tol) {
  if (sign != 1 && sign != -1) throw PreconditionViolated("eigen_desingularize: sign must be +1 or -1");
  if (!normality_check(a, tol.eps)) throw NotNormal("A A* - A* A does not vanish");
  const auto g = matrix_genericity_check(a, tol.eps);
  if (!g.generic())
    throw GenericityViolated("characteristic polynomial: Delta_" + std::to_string(g.k) + " vanishes to order K=" +
                             std::to_string(g.truncation) + " with unknown tail");
  const MatrixCurve<F> ab = sign > 0 ? a : a.compose_power(1, -1);
  EigenResult<F> r;
  r.branch = sign;
  EigenSolver<F> solver(tol, r.trace);
  Sub<F> s = solver.solve(ab, 0, g.k);
  r.N = s.N;

  // orthonormalize constant terms among equal eigenvalue jets, then fix the phase
  const std::size_t n = s.values.size();
  std::vector<char> done(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> grp;
    for (std::size_t j = i; j < n; ++j)
      if (!done[j] && same_jet(s.values[i], s.values[j], tol.eps)) {
        grp.push_back(j);
        done[j] = 1;
      }
    std::vector<JetVector<F>> ortho;
    for (std::size_t j : grp) {
      JetVector<F> w = s.vectors[j];
      for (const auto& u : ortho) w = minus(w, scaled(u, inner0(u, w)));
      const F norm2 = inner0(w, w);
      if (ScalarTraits<F>::is_zero(norm2, tol.eps)) throw RankDrop("eigenvectors are dependent at h = 0");
      // unit norm and first nonzero component positive: w * conj(c) / (|c| |w|)
      std::size_t p = 0;
      const double thr = ScalarTraits<F>::exact ? 0.0 : std::sqrt(tol.eps * ScalarTraits<F>::magnitude(norm2));
      while (p < w.size() && ScalarTraits<F>::is_zero(w[p][0], thr)) ++p;
      const F c = p < w.size() ? w[p][0] : F(1);
      const F cc = ScalarTraits<F>::conj(c);
      w = scaled(w, cc * inverse_sqrt(c * cc * norm2, "eigenvector normalization"));
      ortho.push_back(std::move(w));
    }
    for (std::size_t q = 0; q < grp.size(); ++q) s.vectors[grp[q]] = std::move(ortho[q]);
  }
  r.eigenvalues = std::move(s.values);
  r.eigenvectors = std::move(s.vectors);
  for (auto& v : r.eigenvalues) v.set_t0(a.t0());
  for (auto& v : r.eigenvectors)
    for (auto& x : v) x.set_t0(a.t0());
  return r;
}

template <class F>
EigenPair<F> eigen_desingularize(const MatrixCurve<F>& a, const Tolerances& tol) {
  return {eigen_desingularize_branch(a, 1, tol), eigen_desingularize_branch(a, -1, tol)};
}

template <class F>
std::vector<JetVector<F>> eigen_residual(const MatrixCurve<F>& a, const EigenResult<F>& r) {
  const MatrixCurve<F> ac = a.compose_power(r.N, r.branch);
  std::vector<JetVector<F>> out;
  for (std::size_t j = 0; j < r.eigenvalues.size(); ++j) {
    const auto& v = r.eigenvectors[j];
    int K = std::min(ac.order(), r.eigenvalues[j].order());
    for (const auto& x : v) K = std::min(K, x.order());
    JetVector<F> res;
    for (int i = 0; i < ac.dim(); ++i) {
      Jet<F> acc(K, a.t0(), true);
      for (int l = 0; l < ac.dim(); ++l) acc += ac(i, l).truncated(K) * v[static_cast<std::size_t>(l)].truncated(K);
      acc -= r.eigenvalues[j].truncated(K) * v[static_cast<std::size_t>(i)].truncated(K);
      res.push_back(acc);
    }
    out.push_back(std::move(res));
  }
  return out;
}

EigenTrack eigen_track(const std::vector<double>& grid, const std::vector<std::vector<std::vector<Complex>>>& samples,
                       double eps) {
  if (grid.size() != samples.size()) throw PreconditionViolated("eigen_track: grid and samples differ in length");
  if (samples.empty()) throw PreconditionViolated("eigen_track: no samples");
  const int n = static_cast<int>(samples.front().size());
  using Mat = Eigen::MatrixXcd;
  EigenTrack out;

  std::vector<std::vector<Complex>> values;
  std::vector<Mat> vecs;  // per point, columns aligned with `values`
  for (const auto& sm : samples) {
    if (static_cast<int>(sm.size()) != n) throw PreconditionViolated("eigen_track: sample sizes differ");
    Mat m(n, n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(sm[static_cast<std::size_t>(i)].size()) != n) throw PreconditionViolated("eigen_track: matrices must be square");
      for (int j = 0; j < n; ++j) {
        m(i, j) = sm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        s = std::max(s, std::abs(m(i, j)));
      }
    }
    if (s == 0.0) s = 1.0;
    const Mat ms = m / s;
    const double defect = (ms * ms.adjoint() - ms.adjoint() * ms).cwiseAbs().maxCoeff();
    out.max_normality_defect = std::max(out.max_normality_defect, defect);
    // eigenvalues through the characteristic polynomial of the scaled matrix
    std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ms(i, j);
    std::vector<Complex> lam = roots_at(char_poly_values(rows));
    Eigen::ComplexEigenSolver<Mat> es(ms, true);
    if (es.info() != Eigen::Success) throw DidNotConverge("eigen_track: eigensolver failed");
    std::vector<Complex> ev(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const auto match = match_step(lam, ev);
    Mat v(n, n);
    for (int k = 0; k < n; ++k) v.col(k) = es.eigenvectors().col(match.perm[static_cast<std::size_t>(k)]).normalized();
    for (auto& z : lam) z *= s;
    values.push_back(std::move(lam));
    vecs.push_back(std::move(v));
  }
  if (out.max_normality_defect > std::sqrt(eps))
    out.warnings.push_back("samples are not normal within tolerance (defect " + std::to_string(out.max_normality_defect) + ")");

  out.eigenvalues = track_values(grid, values, eps);
  out.warnings.insert(out.warnings.end(), out.eigenvalues.warnings.begin(), out.eigenvalues.warnings.end());
  out.eigenvectors.assign(static_cast<std::size_t>(n), {});
  out.eigenvector_variation.assign(static_cast<std::size_t>(n), 0.0);

  Mat prev;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& perm = out.eigenvalues.permutations[i];
    Mat cur(n, n);
    for (int j = 0; j < n; ++j) cur.col(j) = vecs[i].col(perm[static_cast<std::size_t>(j)]);
    // clusters of nearly equal eigenvalues share an eigenspace
    std::vector<Complex> lam_path;
    double scale = 1e-300;
    for (int j = 0; j < n; ++j) {
      lam_path.push_back(out.eigenvalues.paths[static_cast<std::size_t>(j)][i]);
      scale = std::max(scale, std::abs(lam_path.back()));
    }
    const auto clusters = single_linkage_clusters(lam_path, std::sqrt(eps) * scale);
    for (const auto& cl : clusters) {
      const int r = static_cast<int>(cl.size());
      Mat q(n, r);
      for (int c = 0; c < r; ++c) q.col(c) = cur.col(cl[static_cast<std::size_t>(c)]);
      if (r > 1) {
        Eigen::HouseholderQR<Mat> qr(q);
        q = qr.householderQ() * Mat::Identity(n, r);
      }
      Mat chosen = q;
      if (i > 0) {
        Mat pv(n, r);
        for (int c = 0; c < r; ++c) pv.col(c) = prev.col(cl[static_cast<std::size_t>(c)]);
        const Mat overlap = q.adjoint() * pv;
        Eigen::JacobiSVD<Mat> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svd.singularValues()(r - 1) > 1e-12) chosen = q * (svd.matrixU() * svd.matrixV().adjoint());
      }
      for (int c = 0; c < r; ++c) cur.col(cl[static_cast<std::size_t>(c)]) = chosen.col(c);
    }
    if (i > 0) {
      for (int j = 0; j < n; ++j) {
        const Complex ov = prev.col(j).dot(cur.col(j));  // <prev, cur>
        if (std::abs(ov) > 0.0) cur.col(j) *= std::conj(ov) / std::abs(ov);
        out.eigenvector_variation[static_cast<std::size_t>(j)] += (cur.col(j) - prev.col(j)).norm();
      }
    }
    for (int j = 0; j < n; ++j) {
      std::vector<Complex> v(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) v[static_cast<std::size_t>(l)] = cur(l, j);
      out.eigenvectors[static_cast<std::size_t>(j)].push_back(std::move(v));
    }
    prev = cur;
  }
  return out;
}

#define ROOTFLOW_INSTANTIATE(F)                                                                       \
  template class MatrixCurve<F>;                                                                      \
  template bool normality_check(const MatrixCurve<F>&, double);                                       \
  template PolyCurve<F> char_poly(const MatrixCurve<F>&);                                             \
  template Genericity matrix_genericity_check(const MatrixCurve<F>&, double);                         \
  template FrameBundle<F> kernel_frame(const MatrixCurve<F>&, double);                                \
  template EigenResult<F> eigen_desingularize_branch(const MatrixCurve<F>&, int, const Tolerances&);  \
  template EigenPair<F> eigen_desingularize(const MatrixCurve<F>&, const Tolerances&);                \
  template std::vector<JetVector<F>> eigen_residual(const MatrixCurve<F>&, const EigenResult<F>&);

ROOTFLOW_INSTANTIATE(Cyclo)
ROOTFLOW_INSTANTIATE(Complex)

#undef ROOTFLOW_INSTANTIATE

}  // namespace rootflow
