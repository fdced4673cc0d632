#include "support.hpp"

using namespace rootflow;
using namespace rootflow::testing;

namespace {

ExactJet rational_jet(std::initializer_list<std::pair<long, long>> c) {
  ExactJet j(static_cast<int>(c.size()) - 1);
  int m = 0;
  for (auto [num, den] : c) j[m++] = Cyclo(mpq_class(num, den));
  return j;
}

// Product of two monic curves through their ordinary coefficients.
template <class F>
PolyCurve<F> multiply(const PolyCurve<F>& p, const PolyCurve<F>& q) {
  const int K = std::min(p.order(), q.order());
  auto coeff = [K](const PolyCurve<F>& c, int j) {
    return j == 0 ? Jet<F>::constant(F(1), K) : c.standard(j).truncated(K);
  };
  std::vector<Jet<F>> s;
  for (int j = 1; j <= p.degree() + q.degree(); ++j) {
    Jet<F> sum(K);
    for (int i = std::max(0, j - q.degree()); i <= std::min(j, p.degree()); ++i) sum += coeff(p, i) * coeff(q, j - i);
    s.push_back(sum);
  }
  return PolyCurve<F>::from_standard(s);
}

bool all_zero(const std::vector<ExactJet>& v) {
  return std::all_of(v.begin(), v.end(), [](const ExactJet& j) { return j.is_zero(); });
}

std::vector<Complex> constants(const std::vector<FloatJet>& roots, int m) {
  std::vector<Complex> out;
  for (const auto& r : roots) out.push_back(r[m]);
  return out;
}

}  // namespace

TEST_CASE("implicit_lift series") {
  // z^2 - (1 + t) through z0 = 1 gives sqrt(1 + t)
  const auto p = ExactCurve::from_standard({ej({0}, 4), -ej({1, 1}, 4)});
  CHECK(implicit_lift(p, Cyclo(1)) == rational_jet({{1, 1}, {1, 2}, {-1, 8}, {1, 16}, {-5, 128}}));
  // z^2 - (4 + t) through z0 = -2 gives -sqrt(4 + t)
  const auto q = ExactCurve::from_standard({ej({0}, 3), -ej({4, 1}, 3)});
  CHECK(implicit_lift(q, Cyclo(-2)) == rational_jet({{-2, 1}, {-1, 4}, {1, 64}, {-1, 512}}));
  CHECK_THROWS_AS(implicit_lift(binomial_curve(2, 1, 1), Cyclo(0)), NotSimpleRoot);
}

TEST_CASE("split examples") {
  // (z - t)(z - 1 - t): clusters {0} and {1}
  const auto p = ExactCurve::from_roots({ej({0, 1}, 6), ej({1, 1}, 6)});
  const auto s = split(p);
  CHECK(s.p1.degree() == 1);
  CHECK(s.p2.degree() == 1);
  CHECK(s.gap == doctest::Approx(1.0));
  CHECK(multiply(s.p1, s.p2).coefficients() == p.coefficients());
  CHECK_THROWS_AS(split(binomial_curve(3, 1, 1)), NoSplit);
}

TEST_CASE("split invariant on random curves") {
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<ExactJet> roots;
    const int n = static_cast<int>(rand_int(2, 4));
    for (int i = 0; i < n; ++i) {
      ExactJet r(5);
      r[0] = Cyclo(i % 2);  // two clusters at 0 and 1
      for (int m = 1; m <= 2; ++m) r[m] = rand_gaussian();
      roots.push_back(r);
    }
    const auto p = ExactCurve::from_roots(roots);
    const auto s = split(p);
    CHECK(s.p1.degree() + s.p2.degree() == n);
    CHECK(multiply(s.p1, s.p2).coefficients() == p.coefficients());
  }
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<FloatJet> roots;
    for (int i = 0; i < 4; ++i) {
      FloatJet r(8);
      r[0] = Complex(i % 2 ? 1.0 : -1.0, 0.5 * i);
      r[1] = rand_complex();
      roots.push_back(r);
    }
    const auto p = FloatCurve::from_roots(roots);
    const auto s = split(p);
    const auto prod = multiply(s.p1, s.p2);
    for (int k = 1; k <= 4; ++k) CHECK(max_diff(prod.a(k), p.a(k)) <= 1e-9);
  }
}

TEST_CASE("tschirnhaus_reduce examples") {
  // (z - 1 - t)(z - 3): shift (4 + t)/2, reduced roots +-(1 - t/2)
  const auto p = ExactCurve::from_roots({ej({1, 1}, 3), ej({3}, 3)});
  const auto r = tschirnhaus_reduce(p);
  CHECK(r.shift == rational_jet({{2, 1}, {1, 2}, {0, 1}, {0, 1}}));
  CHECK(r.reduced.a(1).is_zero());
  CHECK(r.reduced.a(2) == rational_jet({{-1, 1}, {1, 1}, {-1, 4}, {0, 1}}));
  CHECK(tschirnhaus_reduce(binomial_curve(2, 1, 1)).shift.is_zero());
}

TEST_CASE("scale_reduce examples") {
  const auto r = scale_reduce(binomial_curve(2, 1, 2, 8));
  CHECK(r.m == 1);
  CHECK(r.d == 1);
  CHECK(r.plus.a(2)[0] == Cyclo(-1));
  const auto h = scale_reduce(binomial_curve(2, 1, 1, 8));
  CHECK(h.m == mpq_class(1, 2));
  CHECK(h.d == 2);
  CHECK(h.plus.a(2)[0] == Cyclo(-1));
  CHECK(h.minus.a(2)[0] == Cyclo(1));
  CHECK(min_scaled_order(binomial_curve(3, 1, 2, 8)) == mpq_class(2, 3));
  CHECK_FALSE(min_scaled_order(ExactCurve::from_standard({ej({0}, 4), ej({0}, 4)})).has_value());
}

TEST_CASE("desingularize examples") {
  const auto z2t = desingularize(binomial_curve(2, 1, 1, 8));
  CHECK(z2t.plus.N == 2);
  CHECK(z2t.minus.N == 2);
  CHECK(all_zero(residual(binomial_curve(2, 1, 1, 8), z2t.plus)));
  CHECK(all_zero(residual(binomial_curve(2, 1, 1, 8), z2t.minus)));
  std::vector<Cyclo> lin;
  for (const auto& r : z2t.plus.roots) lin.push_back(r[1]);
  CHECK(((lin[0] == Cyclo(1) && lin[1] == Cyclo(-1)) || (lin[0] == Cyclo(-1) && lin[1] == Cyclo(1))));
  for (const auto& r : z2t.minus.roots) CHECK(r[1] * r[1] == Cyclo(-1));

  const auto z3t = desingularize(binomial_curve(3, 1, 1, 6));
  CHECK(z3t.plus.N == 3);
  for (const auto& r : z3t.plus.roots) {
    Cyclo c = r[1] * r[1] * r[1];
    CHECK(c == Cyclo(1));
  }
  CHECK(all_zero(residual(binomial_curve(3, 1, 1, 6), z3t.plus)));

  const auto constant = desingularize(ExactCurve::from_roots({ej({1}, 4), ej({2}, 4)}));
  CHECK(constant.plus.N == 1);
  CHECK(constant.plus.roots.size() == 2);
}

TEST_CASE("desingularize nested scales") {
  // (z^2 - t^3)(z^3 - t): N = lcm of 2 and 3
  const auto p = multiply(binomial_curve(2, 1, 3, 18), binomial_curve(3, 1, 1, 18));
  const auto r = desingularize_branch(p, 1);
  CHECK(r.N == 6);
  CHECK(all_zero(residual(p, r)));
  CHECK(r.roots.size() == 5);
}

TEST_CASE("flat float input is rejected") {
  std::vector<FloatJet> s(2, FloatJet(6, 0.0, false));
  const FloatCurve flat = FloatCurve::from_standard(s);
  CHECK_THROWS_AS(desingularize(flat), Error);
  try {
    desingularize(flat);
  } catch (const Error& e) {
    CHECK(e.error_class() == ErrorClass::Genericity);
  }
}

TEST_CASE("float desingularization matches exact") {
  const auto ex = desingularize_branch(binomial_curve(2, 1, 1, 8), 1);
  std::vector<FloatJet> s = {fj({0.0}, 8), -fj({0.0, 1.0}, 8)};
  const auto fl = desingularize_branch(FloatCurve::from_standard(s), 1);
  CHECK(fl.N == ex.N);
  CHECK(same_multiset(constants(fl.roots, 1), {1.0, -1.0}, 1e-9));
}

TEST_CASE("differentiable_test examples") {
  CHECK_FALSE(differentiable_test(binomial_curve(2, 1, 1)).ok);
  CHECK(differentiable_test(binomial_curve(2, 1, 2)).ok);
  const auto lin = ExactCurve::from_roots({ej({0, 1}, 8), ej({0, 2}, 8)});
  const auto rep = differentiable_test(lin);
  CHECK(rep.ok);
  CHECK(rep.factor_degrees == std::vector<int>{2});
  CHECK_FALSE(rep.failure.has_value());
  const auto bad = differentiable_test(binomial_curve(2, 1, 1));
  REQUIRE(bad.failure.has_value());
  CHECK(bad.failure->k == 2);
  CHECK(bad.failure->order == 1);
  CHECK(bad.failure->required == 2);
}

TEST_CASE("differentiable_roots_local on (z - t)(z - 2t)") {
  const auto p = FloatCurve::from_roots({fj({0.0, 1.0}, 8), fj({0.0, 2.0}, 8)});
  const auto local = differentiable_roots_local(p, uniform_grid(0.0, 0.1, 11));
  CHECK(same_multiset(local.derivative, {1.0, 2.0}, 1e-9));
  CHECK(same_multiset(local.difference_quotient, {1.0, 2.0}, 1e-6));
  REQUIRE(local.paths.size() == 2);
  CHECK(same_multiset({local.paths[0].back(), local.paths[1].back()}, {0.1, 0.2}, 1e-9));
}

TEST_CASE("polynomial root curves pass the differentiability test") {
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ExactJet> roots;
    const int n = static_cast<int>(rand_int(2, 4));
    for (int i = 0; i < n; ++i) {
      ExactJet r(10);
      r[0] = Cyclo(rand_int(0, 1));
      r[1] = rand_gaussian();
      r[2] = rand_gaussian();
      roots.push_back(r);
    }
    CHECK(differentiable_test(ExactCurve::from_roots(roots)).ok);
  }
  // z^2 - t^p has roots +-t^(p/2), differentiable at 0 exactly when p >= 2
  CHECK_FALSE(differentiable_test(binomial_curve(2, 1, 1)).ok);
  for (int p = 2; p <= 5; ++p) CHECK(differentiable_test(binomial_curve(2, 1, p)).ok);
  CHECK_FALSE(differentiable_test(binomial_curve(3, 1, 2)).ok);
  CHECK(differentiable_test(binomial_curve(3, 1, 3)).ok);
}

TEST_CASE("cluster_factors") {
  const auto p = ExactCurve::from_roots({ej({0, 1}, 6), ej({1}, 6), ej({0, -1}, 6)});
  const auto f = cluster_factors(p);
  REQUIRE(f.size() == 2);
  CHECK(f[0].degree() + f[1].degree() == 3);
}
