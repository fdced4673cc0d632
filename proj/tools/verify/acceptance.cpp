#include "acceptance.hpp"

#include "rootflow/rootflow.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace rootflow::verify {

namespace {

// Collects the first few failure messages of a criterion plus summary notes.
class Outcome {
 public:
  void expect(bool cond, const std::string& msg) {
    if (cond) return;
    if (failures_ < 3) fail_text_ += (fail_text_.empty() ? "" : "; ") + msg;
    ++failures_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  bool pass() const { return failures_ == 0; }
  std::string detail() const {
    if (pass()) return notes_;
    std::string s = fail_text_;
    if (failures_ > 3) s += "; (" + std::to_string(failures_ - 3) + " more)";
    if (!notes_.empty()) s += " | " + notes_;
    return s;
  }

 private:
  int failures_ = 0;
  std::string fail_text_;
  std::string notes_;
};

std::string fmt(double x, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

using Rng = std::mt19937_64;

long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

mpq_class small_rational(Rng& rng) { return mpq_class(uniform_int(rng, -4, 4), uniform_int(rng, 1, 3)); }
Cyclo small_gaussian(Rng& rng) { return Cyclo::gaussian(small_rational(rng), small_rational(rng)); }

// Curve from ordinary coefficients given as ascending z-polynomials of jets (monic, top omitted).
template <class F>
using ZPoly = std::vector<Jet<F>>;  // ascending in z, includes the leading 1

template <class F>
ZPoly<F> zmul(const ZPoly<F>& a, const ZPoly<F>& b) {
  const int K = std::min(a.front().order(), b.front().order());
  ZPoly<F> r(a.size() + b.size() - 1, Jet<F>(K));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

template <class F>
PolyCurve<F> curve_from_zpoly(const ZPoly<F>& z) {
  const std::size_t n = z.size() - 1;
  std::vector<Jet<F>> c;
  for (std::size_t j = 1; j <= n; ++j) c.push_back(z[n - j]);
  return PolyCurve<F>::from_standard(c);
}

// z^n + c h^p as ascending z-polynomial
template <class F>
ZPoly<F> binomial_factor(int n, const F& c, int p, int K) {
  ZPoly<F> z(static_cast<std::size_t>(n + 1), Jet<F>(K));
  z[0] = Jet<F>::monomial(c, p, K);
  z[static_cast<std::size_t>(n)] = Jet<F>::constant(F(1), K);
  return z;
}

template <class F>
ZPoly<F> linear_factor(const Jet<F>& root) {
  return {-root, Jet<F>::constant(F(1), root.order())};
}

double l1_norm(const FloatJet& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::abs(c);
  return s;
}
double l1_norm(const ExactJet& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::abs(c.approx());
  return s;
}

// Sum over k-subsets of prod_{a<b} (lambda_a - lambda_b)^2. ref[k-1] bounds the
// coefficient size of the summands: sum over subsets of prod |lambda_a - lambda_b|_1^2,
// floored at C(n,k) R^{k(k-1)} with R the largest root norm, since repeated
// roots make the sum vanish while the power sums behind the minors do not.
template <class F>
void subset_discriminants(const std::vector<Jet<F>>& roots, std::vector<Jet<F>>& out, std::vector<double>& ref) {
  const int n = static_cast<int>(roots.size());
  const int K = roots.front().order();
  out.assign(static_cast<std::size_t>(n), Jet<F>(K));
  ref.assign(static_cast<std::size_t>(n), 0.0);
  double R = 1.0;
  for (const auto& r : roots) R = std::max(R, l1_norm(r));
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int k = std::popcount(mask);
    Jet<F> prod = Jet<F>::constant(F(1), K);
    double mag = 1.0;
    for (int a = 0; a < n; ++a) {
      if (!(mask & (1u << a))) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!(mask & (1u << b))) continue;
        const Jet<F> d = roots[static_cast<std::size_t>(a)] - roots[static_cast<std::size_t>(b)];
        prod = prod * d * d;
        mag *= l1_norm(d) * l1_norm(d);
      }
    }
    out[static_cast<std::size_t>(k - 1)] += prod;
    ref[static_cast<std::size_t>(k - 1)] += mag;
  }
  for (int k = 1; k <= n; ++k)
    ref[static_cast<std::size_t>(k - 1)] = std::max(ref[static_cast<std::size_t>(k - 1)],
                                                    binomial(n, k) * std::pow(R, k * (k - 1)));
}

double jet_diff(const FloatJet& a, const FloatJet& b, int upto = -1) {
  const int K = upto < 0 ? std::min(a.order(), b.order()) : upto;
  double m = 0.0;
  for (int i = 0; i <= K; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- criteria

void bezoutiant_oracle(const Options& opt, Outcome& out) {
  Rng rng(opt.seed);
  const int K = 3;
  int exact_cases = 0, float_cases = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 1, 5));
    std::vector<ExactJet> er;
    std::vector<FloatJet> fr;
    for (int i = 0; i < n; ++i) {
      ExactJet e(K);
      FloatJet f(K);
      if (i > 0 && uniform_int(rng, 0, 3) == 0) {
        // repeated constant term, sometimes a repeated germ
        e = er[static_cast<std::size_t>(uniform_int(rng, 0, i - 1))];
        f = fr[static_cast<std::size_t>(uniform_int(rng, 0, i - 1))];
        if (uniform_int(rng, 0, 1)) {
          e[1] += small_gaussian(rng);
          f[1] += Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
        }
      } else {
        for (int m = 0; m <= 2; ++m) {
          e[m] = small_gaussian(rng);
          f[m] = Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
        }
      }
      er.push_back(e);
      fr.push_back(f);
    }
    {
      const auto b = bezoutiant(ExactCurve::from_roots(er));
      std::vector<ExactJet> oracle;
      std::vector<double> ref;
      subset_discriminants(er, oracle, ref);
      for (int k = 1; k <= n; ++k)
        out.expect(b.delta(k) == oracle[static_cast<std::size_t>(k - 1)],
                   "exact trial " + std::to_string(trial) + ": Delta_" + std::to_string(k) + " differs from the subset sum");
      ++exact_cases;
    }
    {
      const auto b = bezoutiant(FloatCurve::from_roots(fr));
      std::vector<FloatJet> oracle;
      std::vector<double> ref;
      subset_discriminants(fr, oracle, ref);
      for (int k = 1; k <= n; ++k) {
        const double rel = jet_diff(b.delta(k), oracle[static_cast<std::size_t>(k - 1)]) /
                           std::max(ref[static_cast<std::size_t>(k - 1)], 1e-300);
        worst = std::max(worst, rel);
        out.expect(rel <= 1e-9, "float trial " + std::to_string(trial) + ": Delta_" + std::to_string(k) +
                                    " relative error " + fmt(rel));
      }
      ++float_cases;
    }
  }
  out.note(std::to_string(exact_cases) + " exact + " + std::to_string(float_cases) +
           " float multisets, worst float relative error " + fmt(worst));
}

void desing_family(const Options& opt, Outcome& out) {
  const int K = 16;
  for (int n = 2; n <= 6; ++n) {
    std::vector<ExactJet> c(static_cast<std::size_t>(n), ExactJet(K));
    c.back() = -ExactJet::variable(K);
    const ExactCurve p = ExactCurve::from_standard(c);
    const auto pair = desingularize(p, opt.tol);
    for (const auto* r : {&pair.plus, &pair.minus}) {
      const std::string tag = "z^" + std::to_string(n) + "-t " + (r->branch > 0 ? "plus" : "minus");
      out.expect(r->N == n, tag + ": N=" + std::to_string(r->N));
      std::vector<Cyclo> units;
      for (const auto& root : r->roots) {
        bool shape = root.degree() == 1 && root[0].is_zero();
        Cyclo u = root[1];
        Cyclo pw(1);
        for (int i = 0; i < n; ++i) pw *= u;
        out.expect(shape && pw == Cyclo(r->branch), tag + ": root is not (n-th root of " +
                                                       std::to_string(r->branch) + ") * h: " + u.str());
        for (const auto& v : units) out.expect(!(v == u), tag + ": repeated root " + u.str());
        units.push_back(u);
      }
      out.expect(static_cast<int>(units.size()) == n, tag + ": wrong number of roots");
      for (const auto& res : residual(p, *r)) out.expect(res.is_zero(), tag + ": residual jet not zero");
    }
  }
  out.note("n = 2..6, N = n on both branches, roots zeta*h, residuals exactly zero");
}

void desing_nested(const Options& opt, Outcome& out) {
  const int K = 16;
  std::vector<ExactJet> c(2, ExactJet(K));
  c[1] = -ExactJet::monomial(Cyclo(1), 3, K);
  const ExactCurve p = ExactCurve::from_standard(c);
  const auto pair = desingularize(p, opt.tol);
  const auto& r = pair.plus;
  out.expect(r.N == 2, "N=" + std::to_string(r.N));
  bool plus = false, minus = false;
  for (const auto& root : r.roots) {
    ExactJet h3 = ExactJet::monomial(Cyclo(1), 3, root.order());
    if (root == h3) plus = true;
    if (root == -h3) minus = true;
  }
  out.expect(plus && minus && r.roots.size() == 2, "plus-branch roots are not +-h^3");
  std::vector<mpq_class> ms;
  for (const auto& s : r.trace) {
    if (s.kind != TraceStep::Kind::ShiftScale) continue;
    ms.push_back(s.m);
    out.expect(s.m_tilde == s.d * s.m - 1, "m_tilde != d m - 1 at depth " + std::to_string(s.depth));
    out.expect(s.m_tilde < s.m, "m_tilde >= m at depth " + std::to_string(s.depth));
  }
  out.expect(ms.size() == 2 && ms[0] == mpq_class(3, 2) && ms[1] == mpq_class(1, 2),
             "ShiftScale m sequence is not 3/2, 1/2");
  for (const auto& res : residual(p, r)) out.expect(res.is_zero(), "residual jet not zero");
  out.note("N=2, roots +-h^3, m = 3/2 -> 1/2 -> 0");
}

void differentiability(const Options& opt, Outcome& out) {
  const int K = 16;
  auto exact_curve = [&](int p) {
    std::vector<ExactJet> c(2, ExactJet(K));
    c[1] = -ExactJet::monomial(Cyclo(1), p, K);
    return ExactCurve::from_standard(c);
  };
  const auto r1 = differentiable_test(exact_curve(1), opt.tol);
  const auto r2 = differentiable_test(exact_curve(2), opt.tol);
  out.expect(!r1.ok, "z^2-t reported differentiable");
  out.expect(r2.ok, "z^2-t^2 reported not differentiable");
  if (r1.failure) out.note("z^2-t: m(Delta_2)=" + std::to_string(r1.failure->order) + " < 2");

  std::vector<FloatJet> c(2, FloatJet(K));
  c[1] = -FloatJet::monomial(1.0, 2, K);
  std::vector<double> grid;
  for (int i = -100; i <= 100; ++i) grid.push_back(i * 1e-3);
  const auto lr = differentiable_roots_local(FloatCurve::from_standard(c), grid, opt.tol);
  std::vector<double> d;
  for (std::size_t j = 0; j < lr.derivative.size(); ++j) {
    d.push_back(lr.derivative[j].real());
    out.expect(std::abs(lr.derivative[j].imag()) <= 1e-6, "derivative not real");
    out.expect(std::abs(lr.difference_quotient[j] - lr.derivative[j]) <= 1e-6,
               "difference quotient " + fmt(std::abs(lr.difference_quotient[j])) + " differs from derivative");
  }
  std::sort(d.begin(), d.end());
  out.expect(d.size() == 2 && std::abs(d[0] + 1) <= 1e-6 && std::abs(d[1] - 1) <= 1e-6,
             "derivatives at 0 are not -1, +1");
  if (d.size() == 2) out.note("derivatives " + fmt(d[0], "%.9f") + ", " + fmt(d[1], "%.9f") + " on spacing 1e-3");
}

void lemma_equivalence(const Options& opt, Outcome& out) {
  Rng rng(opt.seed + 5);
  int agree = 0, both_true = 0;
  for (int r = 1; r <= 3; ++r) {
    for (int trial = 0; trial < 100; ++trial) {
      const int n = static_cast<int>(uniform_int(rng, 2, 4));
      const int K = n * (n - 1) * r + 2;
      const bool aligned = uniform_int(rng, 0, 1) == 1;
      std::vector<ExactJet> a(static_cast<std::size_t>(n), ExactJet(K));
      for (int k = 2; k <= n; ++k) {
        if (uniform_int(rng, 0, 6) == 0) continue;  // identically zero
        long e = k * r + uniform_int(rng, aligned ? 0 : -2, 2);
        e = std::max(0L, e);
        ExactJet f(K);
        for (long m = e; m <= std::min<long>(e + 2, K); ++m) {
          long v = uniform_int(rng, -3, 3);
          if (m == e && v == 0) v = 1;
          f[static_cast<int>(m)] = Cyclo(v);
        }
        a[static_cast<std::size_t>(k - 1)] = f;
      }
      const ExactCurve p(a);
      try {
        const auto eq = multiplicity_equivalence_check(p, r, opt.tol.eps);
        out.expect(eq.lhs == eq.rhs, "r=" + std::to_string(r) + " trial " + std::to_string(trial) +
                                         ": m(a_k) test " + (eq.lhs ? "true" : "false") + " but minor test " +
                                         (eq.rhs ? "true" : "false"));
        if (eq.lhs == eq.rhs) ++agree;
        if (eq.lhs && eq.rhs) ++both_true;
      } catch (const Error& e) {
        out.expect(false, "r=" + std::to_string(r) + " trial " + std::to_string(trial) + ": " + e.what());
      }
    }
  }
  out.note(std::to_string(agree) + "/300 agree (" + std::to_string(both_true) + " with both conditions true)");
}

RootPaths track_sqrt(int points, double eps) {
  const auto grid = uniform_grid(0.0, 1.0, points);
  std::vector<std::vector<Complex>> coeffs;
  coeffs.reserve(grid.size());
  for (double t : grid) coeffs.push_back({0.0, -t});
  return track(grid, coeffs, eps);
}

void tracking_regularity(const Options& opt, Outcome& out) {
  const std::vector<int> Ms = {1000, 10000, 100000};
  std::vector<double> hoelder, l1, l2;
  for (int M : Ms) {
    const RootPaths p = track_sqrt(M, opt.tol.eps);
    const PathDiagnostics d = path_diagnostics(p, 2);
    for (std::size_t j = 0; j < d.total_variation.size(); ++j)
      out.expect(std::abs(d.total_variation[j] - 1.0) <= 0.01,
                 "M=" + std::to_string(M) + ": total variation " + fmt(d.total_variation[j], "%.6f"));
    hoelder.push_back(d.hoelder);
    l1.push_back(lp_difference_quotient_norm(p, 1.0));
    l2.push_back(lp_difference_quotient_norm(p, 2.0));
  }
  std::string l2s, hs;
  for (std::size_t i = 1; i < Ms.size(); ++i) {
    const double hr = hoelder[i] / hoelder[i - 1];
    const double r2 = l2[i] / l2[i - 1];
    const double r1 = l1[i] / l1[i - 1];
    out.expect(std::abs(hr - 1.0) <= 0.10, "Hoelder-1/2 constant ratio " + fmt(hr, "%.4f"));
    out.expect(r2 >= 2.0, "L^2 difference-quotient norm grows only x" + fmt(r2, "%.4f") + " from M=" +
                              std::to_string(Ms[i - 1]) + " to " + std::to_string(Ms[i]));
    out.expect(std::abs(r1 - 1.0) <= 0.01, "L^1 norm ratio " + fmt(r1, "%.4f"));
    l2s += (i > 1 ? ", " : "") + fmt(r2, "%.3f");
    hs += (i > 1 ? ", " : "") + fmt(hr, "%.4f");
  }
  out.note("L2 norms " + fmt(l2[0], "%.4f") + ", " + fmt(l2[1], "%.4f") + ", " + fmt(l2[2], "%.4f") +
           " (ratios " + l2s + "); L1 " + fmt(l1.back(), "%.6f") + "; Hoelder ratios " + hs);
}

void pullback(const Options& opt, Outcome& out) {
  const int M = 1001;
  const RootPaths tracked = track_sqrt(M, opt.tol.eps);
  const int K = 16;
  std::vector<FloatJet> c(2, FloatJet(K, 0.0, false));
  c[1] = -FloatJet::variable(K);
  c[1].set_polynomial(false);
  const auto r = desingularize_branch(FloatCurve::from_standard(c), 1, opt.tol);
  out.expect(r.N == 2, "desingularized N=" + std::to_string(r.N));
  RootPaths hp;
  for (double t : tracked.grid) hp.grid.push_back(std::sqrt(t));
  for (const auto& root : r.roots) {
    std::vector<Complex> v;
    for (double h : hp.grid) v.push_back(root.eval(h));
    hp.paths.push_back(std::move(v));
  }
  const RootPaths pb = pullback_path(hp, r.N, 1);
  double grid_err = 0.0;
  for (std::size_t i = 0; i < pb.grid.size(); ++i) grid_err = std::max(grid_err, std::abs(pb.grid[i] - tracked.grid[i]));
  out.expect(grid_err <= 1e-12, "pulled back grid differs by " + fmt(grid_err));
  // path identities: optimal assignment at the last point
  std::vector<Complex> last_pb, last_tr;
  for (const auto& p : pb.paths) last_pb.push_back(p.back());
  for (const auto& p : tracked.paths) last_tr.push_back(p.back());
  const auto m = match_step(last_tr, last_pb);
  double worst = 0.0;
  for (std::size_t j = 0; j < tracked.paths.size(); ++j)
    for (std::size_t i = 0; i < tracked.grid.size(); ++i)
      worst = std::max(worst, std::abs(tracked.paths[j][i] - pb.paths[static_cast<std::size_t>(m.perm[j])][i]));
  out.expect(worst <= 1e-8, "pointwise deviation " + fmt(worst));
  out.note("max pointwise deviation " + fmt(worst) + " over " + std::to_string(M) + " points");
}

void quadratic_coordinates(const Options& opt, Outcome& out) {
  Rng rng(opt.seed + 8);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Complex f(g(rng), g(rng));
    const auto q = quadratic_lift_coordinates(f);
    const Complex s = std::sqrt(f);
    const double x[2] = {s.real(), -s.real()}, y[2] = {s.imag(), -s.imag()};
    // (tau_10, tau_01, tau_20, tau_02, tau_11) summed directly over the roots
    const double oracle[5] = {x[0] + x[1], y[0] + y[1], x[0] * x[0] + x[1] * x[1], y[0] * y[0] + y[1] * y[1],
                              x[0] * y[0] + x[1] * y[1]};
    for (int k = 0; k < 5; ++k) {
      const double e = std::abs(q[static_cast<std::size_t>(k)] - oracle[k]) / std::max(1.0, std::abs(f));
      worst = std::max(worst, e);
      out.expect(e <= 1e-12, "trial " + std::to_string(trial) + " coordinate " + std::to_string(k) + " error " + fmt(e));
    }
  }
  double worst_tau = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 1, 4));
    std::vector<double> x, y;
    for (int k = 0; k < n; ++k) {
      x.push_back(g(rng));
      y.push_back(g(rng));
    }
    const auto s = tau_inverse_T(polarization_tau(x, y), n);
    for (int m = 1; m <= n; ++m) {
      Complex direct = 0.0;
      double scale = 0.0;
      for (int k = 0; k < n; ++k) {
        direct += std::pow(Complex(x[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(k)]), m);
        scale += std::pow(std::hypot(x[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(k)]), m);
      }
      const double e = std::abs(s[static_cast<std::size_t>(m - 1)] - direct) / std::max(1.0, scale);
      worst_tau = std::max(worst_tau, e);
      out.expect(e <= 1e-10, "tau roundtrip n=" + std::to_string(n) + " m=" + std::to_string(m) + " error " + fmt(e));
    }
  }
  out.note("coordinates worst " + fmt(worst) + ", tau roundtrip worst " + fmt(worst_tau));
}

Eigen::MatrixXcd random_unitary(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ();
}

// U diag(d) U*
FloatMatrix conjugated_diagonal(const Eigen::MatrixXcd& u, const std::vector<FloatJet>& d) {
  const int n = static_cast<int>(d.size());
  const int K = d.front().order();
  std::vector<FloatJet> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FloatJet acc(K, 0.0, false);
      for (int k = 0; k < n; ++k) acc += d[static_cast<std::size_t>(k)] * (u(i, k) * std::conj(u(j, k)));
      acc.set_polynomial(false);
      e.push_back(acc);
    }
  return FloatMatrix(n, std::move(e));
}

// Largest coefficient difference between the eigenvalue jets and the reference
// jets after the best matching.
double eigenvalue_mismatch(const std::vector<FloatJet>& got, const std::vector<FloatJet>& want) {
  std::vector<int> perm(want.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = 1e300;
  do {
    double w = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      w = std::max(w, jet_diff(got[i], want[static_cast<std::size_t>(perm[i])]));
    best = std::min(best, w);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void normal_matrix(const Options& opt, Outcome& out) {
  const int K = 16;
  {
    const ExactJet z(K), t = ExactJet::variable(K);
    const ExactMatrix a(2, {z, t, t, z});
    const auto pair = eigen_desingularize(a, opt.tol);
    out.expect(pair.plus.N == 1 && pair.minus.N == 1, "N is not 1");
    const auto& r = pair.plus;
    const Cyclo sqrt2 = *exact_sqrt(Cyclo(2));
    bool got_plus = false, got_minus = false;
    for (std::size_t j = 0; j < r.eigenvalues.size(); ++j) {
      const auto& mu = r.eigenvalues[j];
      const auto& v = r.eigenvectors[j];
      const int s = mu == t ? 1 : (mu == -t ? -1 : 0);
      out.expect(s != 0, "eigenvalue is not +-t");
      if (s == 0) continue;
      (s > 0 ? got_plus : got_minus) = true;
      for (const auto& x : v) out.expect(x.degree() <= 0, "eigenvector is not constant");
      out.expect(v[0][0] * sqrt2 == Cyclo(1) && v[1][0] * sqrt2 == Cyclo(s),
                 "eigenvector for " + std::string(s > 0 ? "+t" : "-t") + " is not (1," + (s > 0 ? "1" : "-1") + ")/sqrt 2");
    }
    out.expect(got_plus && got_minus, "eigenvalues are not {t, -t}");
    // Gram matrix of constant terms
    for (std::size_t i = 0; i < r.eigenvectors.size(); ++i)
      for (std::size_t j = 0; j < r.eigenvectors.size(); ++j) {
        Cyclo g;
        for (std::size_t l = 0; l < 2; ++l) g += r.eigenvectors[i][l][0].conj() * r.eigenvectors[j][l][0];
        out.expect(g == Cyclo(i == j ? 1 : 0), "eigenvectors not orthonormal");
      }
    for (const auto& v : eigen_residual(a, r))
      for (const auto& x : v) out.expect(x.is_zero(), "exact residual not zero");
  }
  Rng rng(opt.seed + 9);
  double worst_val = 0.0, worst_res = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = random_unitary(rng, 3);
    std::vector<FloatJet> d(3, FloatJet(K, 0.0, false));
    auto rc = [&] { return Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1)); };
    // two eigenvalue germs meet at h = 0, the third stays apart
    d[0][1] = rc();
    d[0][2] = rc();
    d[1][1] = rc();
    d[1][3] = rc();
    d[2][0] = 2.0 + rc();
    d[2][1] = rc();
    const FloatMatrix a = conjugated_diagonal(u, d);
    try {
      const auto r = eigen_desingularize_branch(a, 1, opt.tol);
      const double mv = eigenvalue_mismatch(r.eigenvalues, d);
      double mr = 0.0;
      for (const auto& v : eigen_residual(a, r))
        for (const auto& x : v) mr = std::max(mr, x.max_abs());
      worst_val = std::max(worst_val, mv);
      worst_res = std::max(worst_res, mr);
      out.expect(r.N == 1, "3x3 trial " + std::to_string(trial) + ": N=" + std::to_string(r.N));
      out.expect(mv <= 1e-8, "3x3 trial " + std::to_string(trial) + ": eigenvalue jets off by " + fmt(mv));
      out.expect(mr <= 1e-8, "3x3 trial " + std::to_string(trial) + ": residual " + fmt(mr));
    } catch (const Error& e) {
      out.expect(false, "3x3 trial " + std::to_string(trial) + ": " + e.what());
    }
  }
  out.note("exact 2x2: N=1, +-t, (1,+-1)/sqrt2; float U diag U*: eigenvalue error " + fmt(worst_val) +
           ", residual " + fmt(worst_res));
}

void counterexample_gates(const Options& opt, Outcome& out) {
  const int K = 16;
  {
    const ExactMatrix a(2, {ExactJet(K), ExactJet::constant(Cyclo(1), K), ExactJet::variable(K), ExactJet(K)});
    out.expect(!normality_check(a, opt.tol.eps), "[[0,1],[t,0]] passes normality_check");
    bool rejected = false;
    try {
      eigen_desingularize(a, opt.tol);
    } catch (const NotNormal&) {
      rejected = true;
    } catch (const Error&) {
    }
    out.expect(rejected, "eigen_desingularize did not reject [[0,1],[t,0]] with NotNormal");
  }
  auto gate = [&](auto zero, const char* tag) {
    using F = typename decltype(zero)::Scalar;
    const MatrixCurve<F> a(2, std::vector<Jet<F>>(4, zero));
    const auto g = matrix_genericity_check(a, opt.tol.eps);
    out.expect(!g.generic(), std::string(tag) + ": flat input reported generic");
    bool refused = false;
    try {
      eigen_desingularize(a, opt.tol);
    } catch (const GenericityViolated&) {
      refused = true;
    } catch (const Error&) {
    }
    out.expect(refused, std::string(tag) + ": flat input produced eigenvectors");
  };
  gate(ExactJet(K, 0.0, false), "exact");
  gate(FloatJet(K, 0.0, false), "float");

  // sampled indicator: eigenvector paths rotate once per period of 1/t
  std::vector<double> grid = uniform_grid(0.05, 1.0, 4001);
  std::vector<std::vector<std::vector<Complex>>> samples;
  for (double t : grid) {
    const double e = std::exp(-1.0 / (t * t)), c = std::cos(2.0 / t), s = std::sin(2.0 / t);
    samples.push_back({{e * c, e * s}, {e * s, -e * c}});
  }
  try {
    const auto tr = eigen_track(grid, samples, opt.tol.eps);
    double v = 0.0;
    for (double x : tr.eigenvector_variation) v = std::max(v, x);
    out.note("non-normal rejected, flat jets Undetermined; sampled eigenvector variation on [0.05,1] " + fmt(v, "%.2f") +
             " (closed form " + fmt(1.0 / 0.05 - 1.0, "%.2f") + ")");
  } catch (const Error& e) {
    out.note(std::string("sampled indicator unavailable: ") + e.what());
  }
}

// ----------------------------------------------------------- invariant suites

template <class F>
void check_desingularization(const PolyCurve<F>& p, const std::string& tag, const Tolerances& tol, Outcome& out) {
  const auto pair = desingularize(p, tol);
  for (const auto* r : {&pair.plus, &pair.minus}) {
    const std::string t = tag + (r->branch > 0 ? " (+)" : " (-)");
    int K = r->roots.front().order();
    for (const auto& x : r->roots) K = std::min(K, x.order());
    const PolyCurve<F> pc = p.compose_power(r->N, r->branch);
    const double scale = std::max(1.0, pc.root_scale());
    // residual
    for (const auto& res : residual(p, *r)) {
      if constexpr (ScalarTraits<F>::exact) out.expect(res.is_zero(), t + ": residual not zero");
      else out.expect(res.max_abs() <= 1e-8 * std::pow(scale, p.degree()), t + ": residual " + fmt(res.max_abs()));
    }
    // Vieta roundtrip
    std::vector<Jet<F>> roots;
    for (const auto& x : r->roots) roots.push_back(x.truncated(K));
    const auto sigma = elementary_symmetric(roots, Jet<F>(K), Jet<F>::constant(F(1), K));
    for (int j = 1; j <= p.degree(); ++j) {
      const Jet<F> want = pc.a(j).truncated(K);
      if constexpr (ScalarTraits<F>::exact) {
        out.expect(sigma[static_cast<std::size_t>(j - 1)] == want, t + ": Vieta mismatch in a_" + std::to_string(j));
      } else {
        const double e = jet_diff(sigma[static_cast<std::size_t>(j - 1)], want);
        out.expect(e <= 1e-8 * std::pow(scale, j), t + ": Vieta mismatch " + fmt(e) + " in a_" + std::to_string(j));
      }
    }
    // trace: N = product of the d's, m_tilde = d m - 1 < m with denominator <= degree
    long prod = 1;
    for (const auto& s : r->trace) {
      if (s.kind != TraceStep::Kind::ShiftScale) continue;
      prod *= s.d;
      out.expect(s.m_tilde == s.d * s.m - 1 && s.m_tilde < s.m, t + ": m_tilde invariant broken");
      out.expect(s.m_tilde.get_den() <= static_cast<unsigned long>(s.degree), t + ": m_tilde denominator too large");
    }
    out.expect(prod == r->N, t + ": N=" + std::to_string(r->N) + " but product of d is " + std::to_string(prod));
  }
}

int suite_desingularize(const Options& opt, Outcome& out) {
  int cases = 0;
  const int K = 16;
  auto X = [&](long c, int p) { return ExactJet::monomial(Cyclo(c), p, K); };
  auto one = [&] { return ExactJet::constant(Cyclo(1), K); };
  std::vector<std::pair<std::string, ExactCurve>> exact;
  exact.emplace_back("(z^2-t)(z-1)", curve_from_zpoly(zmul(binomial_factor(2, Cyclo(-1), 1, K), linear_factor(one()))));
  exact.emplace_back("(z-t)^2-t^3", curve_from_zpoly(ZPoly<Cyclo>{X(1, 2) - X(1, 3), X(-2, 1), one()}));
  exact.emplace_back("(z-t)^2(z+2t)", curve_from_zpoly(zmul(zmul(linear_factor(X(1, 1)), linear_factor(X(1, 1))),
                                                            linear_factor(X(-2, 1)))));
  exact.emplace_back("z^4-t", curve_from_zpoly(binomial_factor(4, Cyclo(-1), 1, K)));
  exact.emplace_back("z^2+t^2", curve_from_zpoly(binomial_factor(2, Cyclo(1), 2, K)));
  exact.emplace_back("(z^2-t^3)(z^3-t)", curve_from_zpoly(zmul(binomial_factor(2, Cyclo(-1), 3, K),
                                                               binomial_factor(3, Cyclo(-1), 1, K))));
  exact.emplace_back("(z^2-t)(z^2-4t)", curve_from_zpoly(zmul(binomial_factor(2, Cyclo(-1), 1, K),
                                                              binomial_factor(2, Cyclo(-4), 1, K))));
  for (const auto& [name, p] : exact) {
    try {
      check_desingularization(p, name, opt.tol, out);
    } catch (const Error& e) {
      out.expect(false, name + ": " + e.what());
    }
    ++cases;
  }
  // random float curves from smooth roots with contact at h = 0; contact order
  // up to 2 among 4 roots needs m(Delta_4) = 24 to be visible. Higher orders
  // would lose float accuracy in the top coefficients.
  Rng rng(opt.seed + 11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 2, 4));
    std::vector<FloatJet> roots;
    for (int j = 0; j < n; ++j) {
      FloatJet f(24, 0.0, false);
      if (j > 0 && uniform_int(rng, 0, 1)) {
        f = roots[static_cast<std::size_t>(uniform_int(rng, 0, j - 1))];
        const int m = static_cast<int>(uniform_int(rng, 1, 2));
        f[m] += Complex(uniform_real(rng, 0.5, 1.5), uniform_real(rng, -1, 1));
      } else {
        // decaying coefficients keep the complex branch points of the
        // perturbed curve away from h = 0, so the top jet coefficients stay
        // accurate in floating point
        for (int m = 0; m <= 3; ++m)
          f[m] = std::pow(0.25, m) * Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
      }
      roots.push_back(f);
    }
    FloatCurve p = FloatCurve::from_roots(roots);
    try {
      check_desingularization(p, "random float curve " + std::to_string(trial), opt.tol, out);
    } catch (const Error& e) {
      out.expect(false, "random float curve " + std::to_string(trial) + ": " + e.what());
    }
    ++cases;
  }
  return cases;
}

// Roots of the monic polynomial with ordinary ascending coefficients, by a
// dense eigensolver on the companion matrix.
std::vector<Complex> companion_roots(const std::vector<Complex>& a) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) {
    // z^n + sum (-1)^j a_j z^{n-j}: coefficient of z^{n-j}
    const int j = n - i;
    c(i, n - 1) = -(j % 2 == 0 ? a[static_cast<std::size_t>(j - 1)] : -a[static_cast<std::size_t>(j - 1)]);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  std::vector<Complex> r;
  for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()(i));
  return r;
}

int suite_tracking(const Options& opt, Outcome& out) {
  int cases = 0;
  Rng rng(opt.seed + 12);
  // multiset consistency on random sampled curves
  for (int trial = 0; trial < 10; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 2, 5));
    std::vector<std::vector<Complex>> poly(static_cast<std::size_t>(n));
    for (auto& c : poly)
      for (int m = 0; m < 3; ++m) c.push_back(Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1)));
    const auto grid = uniform_grid(-1.0, 1.0, 401);
    std::vector<std::vector<Complex>> coeffs, reference;
    double scale = 1.0;
    for (double t : grid) {
      std::vector<Complex> a;
      for (const auto& c : poly) a.push_back(c[0] + t * (c[1] + t * c[2]));
      reference.push_back(companion_roots(a));
      for (const auto& z : reference.back()) scale = std::max(scale, std::abs(z));
      coeffs.push_back(std::move(a));
    }
    const RootPaths p = track(grid, coeffs, opt.tol.eps);
    const double dev = multiset_deviation(p, reference);
    out.expect(dev <= 1e-8 * scale, "tracking trial " + std::to_string(trial) + ": multiset deviation " + fmt(dev));
    ++cases;
  }
  // continuous regluing of tracked paths where they meet keeps the Lipschitz bound
  {
    const auto grid = uniform_grid(-1.0, 1.0, 201);
    std::vector<std::vector<Complex>> coeffs;
    for (double t : grid) {
      // (z - t)(z + t)(z - t^2)
      const double r[3] = {t, -t, t * t};
      coeffs.push_back({r[0] + r[1] + r[2], r[0] * r[1] + r[0] * r[2] + r[1] * r[2], r[0] * r[1] * r[2]});
    }
    const RootPaths p = track(grid, coeffs, opt.tol.eps);
    const double c0 = path_diagnostics(p, 0).lipschitz;
    const std::size_t mid = 100;  // t = 0, where all three roots meet
    std::vector<int> perm = {0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
      RootPaths q = p;
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = mid; i < grid.size(); ++i) q.paths[j][i] = p.paths[static_cast<std::size_t>(perm[j])][i];
      const double c1 = path_diagnostics(q, 0).lipschitz;
      out.expect(c1 <= c0 * (1 + 1e-9) + 1e-12, "reglued paths raise the Lipschitz estimate to " + fmt(c1));
      ++cases;
    }
  }
  // Hoelder-1/n constants stabilize at branch points
  for (int n : {2, 3}) {
    auto build = [&](int points) {
      const auto grid = uniform_grid(0.0, 1.0, points);
      std::vector<std::vector<Complex>> coeffs;
      for (double t : grid) {
        std::vector<Complex> a(static_cast<std::size_t>(n), 0.0);
        const double c = t * (1.0 + 0.5 * t);
        a.back() = n % 2 == 0 ? -c : c;  // z^n - t (1 + t/2)
        coeffs.push_back(std::move(a));
      }
      return track(grid, coeffs, opt.tol.eps);
    };
    const double h1 = path_diagnostics(build(2000), n).hoelder;
    const double h2 = path_diagnostics(build(4000), n).hoelder;
    out.expect(std::abs(h2 / h1 - 1.0) <= 0.10, "Hoelder-1/" + std::to_string(n) + " ratio " + fmt(h2 / h1));
    ++cases;
  }
  // absolute continuity profile of sqrt t: quartering delta halves the worst sum
  {
    const RootPaths p = track_sqrt(100000, opt.tol.eps);
    const auto d = path_diagnostics(p, 2, {1e-2, 2.5e-3});
    const double ratio = d.ac_profile[1].worst / d.ac_profile[0].worst;
    out.expect(std::abs(ratio - 0.5) <= 0.05, "AC profile ratio " + fmt(ratio));
    ++cases;
  }
  return cases;
}

// Rational orthogonal matrix (I - S)(I + S)^{-1} from a skew-symmetric S.
std::vector<std::vector<Cyclo>> cayley_orthogonal(Rng& rng, int n) {
  std::vector<std::vector<Cyclo>> s(static_cast<std::size_t>(n), std::vector<Cyclo>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Cyclo v(mpq_class(uniform_int(rng, -3, 3), uniform_int(rng, 1, 2)));
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      s[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -v;
    }
  // solve (I + S) X = (I - S) by Gauss-Jordan; I + S is invertible for skew S
  std::vector<std::vector<Cyclo>> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Cyclo id(i == j ? 1 : 0);
      a[static_cast<std::size_t>(i)].push_back(id + s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      b[static_cast<std::size_t>(i)].push_back(id - s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (a[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)].is_zero()) ++p;
    std::swap(a[static_cast<std::size_t>(p)], a[static_cast<std::size_t>(c)]);
    std::swap(b[static_cast<std::size_t>(p)], b[static_cast<std::size_t>(c)]);
    const Cyclo inv = a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)].inverse();
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] *= inv;
      b[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Cyclo f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * b[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
      }
    }
  }
  return b;
}

int suite_normalcurve(const Options& opt, Outcome& out) {
  int cases = 0;
  Rng rng(opt.seed + 13);
  const int K = 8;
  // exact: Q diag(d) Q^T with rational orthogonal Q
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 3;
    const auto q = cayley_orthogonal(rng, n);
    std::vector<ExactJet> d = {ExactJet::monomial(Cyclo(1), 1, K), ExactJet::monomial(Cyclo(-1), 1, K),
                               ExactJet::constant(Cyclo(1), K) + ExactJet::monomial(Cyclo(1), 2, K)};
    if (trial == 2) d[1] = ExactJet::monomial(Cyclo(1), 1, K) + ExactJet::monomial(Cyclo(2), 3, K);
    std::vector<ExactJet> e;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ExactJet acc(K);
        for (int k = 0; k < n; ++k)
          acc += d[static_cast<std::size_t>(k)] *
                 (q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
        e.push_back(acc);
      }
    const ExactMatrix a(n, std::move(e));
    const std::string tag = "exact Q diag Q^T trial " + std::to_string(trial);
    try {
      const auto r = eigen_desingularize_branch(a, 1, opt.tol);
      for (const auto& v : eigen_residual(a, r))
        for (const auto& x : v) out.expect(x.is_zero(), tag + ": residual not zero");
      for (std::size_t i = 0; i < r.eigenvectors.size(); ++i) {
        Cyclo g;
        for (const auto& x : r.eigenvectors[i]) g += x[0].conj() * x[0];
        out.expect(g == Cyclo(1), tag + ": eigenvector constant term not unit");
      }
      for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < r.eigenvalues.size(); ++j) {
          if (!(r.eigenvalues[i] == r.eigenvalues[j])) continue;
          Cyclo g;
          for (std::size_t l = 0; l < r.eigenvectors[i].size(); ++l)
            g += r.eigenvectors[i][l][0].conj() * r.eigenvectors[j][l][0];
          out.expect(g.is_zero(), tag + ": equal-eigenvalue eigenvectors not orthogonal");
        }
    } catch (const Error& ex) {
      out.expect(false, tag + ": " + ex.what());
    }
    ++cases;
  }
  // float: random unitary conjugates, with a repeated eigenvalue germ in one trial
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 3;
    const auto u = random_unitary(rng, n);
    std::vector<FloatJet> d(static_cast<std::size_t>(n), FloatJet(K, 0.0, false));
    for (int k = 0; k < n; ++k) {
      d[static_cast<std::size_t>(k)][0] = k % 2 == 0 ? 0.0 : 1.0;
      d[static_cast<std::size_t>(k)][1] = Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
      d[static_cast<std::size_t>(k)][2] = Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
    }
    const FloatMatrix a = conjugated_diagonal(u, d);
    const std::string tag = "float U diag U* trial " + std::to_string(trial);
    try {
      const auto r = eigen_desingularize_branch(a, 1, opt.tol);
      double mr = 0.0;
      for (const auto& v : eigen_residual(a, r))
        for (const auto& x : v) mr = std::max(mr, x.max_abs());
      out.expect(mr <= 1e-8, tag + ": residual " + fmt(mr));
      out.expect(eigenvalue_mismatch(r.eigenvalues, d) <= 1e-8, tag + ": eigenvalues differ from the diagonal");
      // Gram matrix of eigenvector constant terms
      for (std::size_t i = 0; i < r.eigenvectors.size(); ++i)
        for (std::size_t j = 0; j < r.eigenvectors.size(); ++j) {
          Complex g = 0.0;
          for (std::size_t l = 0; l < r.eigenvectors[i].size(); ++l)
            g += std::conj(r.eigenvectors[i][l][0]) * r.eigenvectors[j][l][0];
          out.expect(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-9, tag + ": Gram matrix not identity");
        }
    } catch (const Error& ex) {
      out.expect(false, tag + ": " + ex.what());
    }
    ++cases;
  }
  // characteristic polynomial at h = 0 against a dense eigensolver
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4;
    std::vector<FloatJet> e;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        FloatJet f(2, 0.0, false);
        f[0] = Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
        f[1] = Complex(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
        m(i, j) = f[0];
        e.push_back(f);
      }
    const auto chi = char_poly(FloatMatrix(n, std::move(e)));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<Complex> dense;
    for (int i = 0; i < n; ++i) dense.push_back(es.eigenvalues()(i));
    RootPaths one;
    one.grid = {0.0};
    for (const auto& z : roots_at(chi.constant_part())) one.paths.push_back({z});
    const double dev = multiset_deviation(one, {dense});
    out.expect(dev <= 1e-9 * std::max(1.0, m.norm()), "char_poly roots differ from dense eigenvalues by " + fmt(dev));
    ++cases;
  }
  // a_j equals the sum of principal j x j minors
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 4;
    std::vector<ExactJet> e;
    for (int q = 0; q < n * n; ++q) {
      ExactJet f(3);
      for (int m = 0; m <= 3; ++m) f[m] = small_gaussian(rng);
      e.push_back(f);
    }
    const ExactMatrix a(n, e);
    const auto chi = char_poly(a);
    std::vector<ExactJet> sums(static_cast<std::size_t>(n), ExactJet(3));
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) idx.push_back(i);
      // Leibniz expansion over permutations of idx
      std::vector<int> perm(idx.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
      ExactJet det(3);
      do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
          for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
        ExactJet term = ExactJet::constant(Cyclo(inversions % 2 ? -1 : 1), 3);
        for (std::size_t i = 0; i < perm.size(); ++i) term = term * a(idx[i], idx[static_cast<std::size_t>(perm[i])]);
        det += term;
      } while (std::next_permutation(perm.begin(), perm.end()));
      sums[idx.size() - 1] += det;
    }
    for (int j = 1; j <= n; ++j)
      out.expect(chi.a(j) == sums[static_cast<std::size_t>(j - 1)],
                 "a_" + std::to_string(j) + " differs from the sum of principal minors");
    ++cases;
  }
  return cases;
}

void invariant_suites(const Options& opt, Outcome& out) {
  const int a = suite_desingularize(opt, out);
  const int b = suite_tracking(opt, out);
  const int c = suite_normalcurve(opt, out);
  out.note(std::to_string(a) + " desingularization, " + std::to_string(b) + " tracking, " + std::to_string(c) +
           " normal-matrix cases");
}

using Body = void (*)(const Options&, Outcome&);

struct Entry {
  Criterion info;
  Body body;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {{1, "bezoutiant", "leading Hankel minors equal the subset discriminant sums"}, bezoutiant_oracle},
      {{2, "desing-family", "z^n - t gives N = n and roots zeta h"}, desing_family},
      {{3, "desing-nested", "z^2 - t^3 gives N = 2, roots +-h^3, m = 3/2 then 1/2"}, desing_nested},
      {{4, "differentiability", "local differentiability test and derivatives at 0"}, differentiability},
      {{5, "lemma-equivalence", "coefficient orders versus minor orders"}, lemma_equivalence},
      {{6, "tracking-regularity", "z^2 - t: variation, Hoelder constant, L^p growth"}, tracking_regularity},
      {{7, "pullback", "smooth paths pulled back along t = h^2 match the tracked paths"}, pullback},
      {{8, "quadratic-coordinates", "polarization coordinates of z^2 - f and the tau roundtrip"}, quadratic_coordinates},
      {{9, "normal-matrix", "eigenpairs of [[0,t],[t,0]] and of U diag U*"}, normal_matrix},
      {{10, "counterexample-gates", "non-normal and flat inputs are refused"}, counterexample_gates},
      {{11, "invariant-suites", "residual, Vieta, multiset, Lipschitz, char poly suites"}, invariant_suites},
  };
  return e;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = [] {
    std::vector<Criterion> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return c;
}

std::vector<CriterionResult> run(const Options& opt, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (const auto& e : entries()) {
    if (!opt.filter.empty() && std::string(e.info.name).find(opt.filter) == std::string::npos) continue;
    CriterionResult r;
    r.id = e.info.id;
    r.name = e.info.name;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.body(opt, out);
    } catch (const std::exception& ex) {
      out.expect(false, std::string("unexpected error: ") + ex.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = out.pass();
    r.detail = out.detail();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s [%2d] %s (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  std::string s = head;
  if (!r.detail.empty()) s += " " + r.detail;
  return s;
}

}  // namespace rootflow::verify
