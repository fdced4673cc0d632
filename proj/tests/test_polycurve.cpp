#include "support.hpp"

#include <bit>

using namespace rootflow;
using namespace rootflow::testing;

TEST_CASE("elementary_from_roots examples") {
  CHECK(elementary_from_roots<Cyclo>({Cyclo(1), Cyclo(3)}) == std::vector<Cyclo>{Cyclo(4), Cyclo(3)});
  CHECK(elementary_from_roots<Cyclo>({Cyclo(0), Cyclo(0), Cyclo(0)}) == std::vector<Cyclo>(3, Cyclo(0)));
  const Cyclo om = Cyclo::root_of_unity(40);
  CHECK(elementary_from_roots<Cyclo>({Cyclo(1), om, om * om}) == std::vector<Cyclo>{Cyclo(0), Cyclo(0), Cyclo(1)});
}

TEST_CASE("newton_from_elementary examples") {
  const Cyclo s1 = rand_gaussian(), s2 = rand_gaussian();
  const auto s = newton_from_elementary<Cyclo>({s1, s2}, 2, Cyclo(0));
  CHECK(s[0] == s1);
  CHECK(s[1] == s1 * s1 - Cyclo(2) * s2);
  CHECK(newton_from_elementary<Cyclo>({Cyclo(0), Cyclo(0)}, 4, Cyclo(0)) == std::vector<Cyclo>(4, Cyclo(0)));
  CHECK(newton_from_elementary<Cyclo>(elementary_from_roots<Cyclo>({Cyclo(1), Cyclo(3)}), 3, Cyclo(0)) ==
        std::vector<Cyclo>{Cyclo(4), Cyclo(10), Cyclo(28)});
}

TEST_CASE("Newton and Vieta roundtrip on random roots") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rand_int(1, 5));
    std::vector<Cyclo> r;
    for (int i = 0; i < n; ++i) r.push_back(rand_gaussian());
    const auto s = newton_from_elementary<Cyclo>(elementary_from_roots(r), 2 * n, Cyclo(0));
    for (int k = 1; k <= 2 * n; ++k) {
      Cyclo direct;
      for (const auto& x : r) {
        Cyclo p(1);
        for (int i = 0; i < k; ++i) p *= x;
        direct += p;
      }
      CHECK(s[static_cast<std::size_t>(k - 1)] == direct);
    }
  }
}

TEST_CASE("bezoutiant examples") {
  const auto b = bezoutiant(ExactCurve::from_roots({ej({1}), ej({3})}));
  CHECK(b.delta(1) == ej({2}));
  CHECK(b.delta(2) == ej({4}));
  CHECK(b.entry(0, 1) == b.entry(1, 0));
  CHECK(bezoutiant(ExactCurve::from_roots({ej({5}), ej({5})})).delta(2).is_zero());
  // discriminant form for n = 3
  std::vector<Cyclo> r = {rand_gaussian(), rand_gaussian(), rand_gaussian()};
  std::vector<ExactJet> rj;
  for (const auto& x : r) rj.push_back(ExactJet::constant(x, 0));
  Cyclo disc(1);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) disc *= (r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]) *
                                            (r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]);
  CHECK(bezoutiant(ExactCurve::from_roots(rj)).delta(3)[0] == disc);
}

TEST_CASE("bezoutiant minors equal the subset sums exactly") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rand_int(1, 5));
    std::vector<ExactJet> roots;
    for (int i = 0; i < n; ++i) {
      ExactJet f(2);
      f[0] = rand_gaussian();
      f[1] = rand_gaussian();
      roots.push_back(f);
    }
    const auto b = bezoutiant(ExactCurve::from_roots(roots));
    for (int k = 1; k <= n; ++k) {
      ExactJet sum(2);
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        ExactJet prod = ej({1}, 2);
        for (int a = 0; a < n; ++a)
          for (int c = a + 1; c < n; ++c)
            if ((mask >> a & 1u) && (mask >> c & 1u)) {
              const ExactJet d = roots[static_cast<std::size_t>(a)] - roots[static_cast<std::size_t>(c)];
              prod = prod * d * d;
            }
        sum += prod;
      }
      CHECK(b.delta(k) == sum);
    }
  }
}

TEST_CASE("distinct_root_count examples") {
  CHECK(distinct_root_count(ExactCurve::from_roots({ej({1}), ej({3})})) == 2);
  CHECK(distinct_root_count(ExactCurve::from_roots({ej({2}), ej({2}), ej({2})})) == 1);
  CHECK(distinct_root_count(ExactCurve::from_roots({ej({1}), ej({1}), ej({2})})) == 2);
  CHECK(distinct_root_count(FloatCurve::from_roots({fj({1.0}), fj({1.0}), fj({2.0})})) == 2);
}

TEST_CASE("distinct_root_count on random constant multisets") {
  for (int trial = 0; trial < 30; ++trial) {
    const int distinct = static_cast<int>(rand_int(1, 4));
    std::vector<Complex> values;
    for (int i = 0; i < distinct; ++i) values.push_back({static_cast<double>(i), rand_real(-1, 1)});
    std::vector<ExactJet> er;
    std::vector<FloatJet> fr;
    for (int i = 0; i < distinct + static_cast<int>(rand_int(0, 2)); ++i) {
      const Complex v = values[static_cast<std::size_t>(i % distinct)];
      fr.push_back(fj({v}));
      er.push_back(ExactJet::constant(Cyclo(i % distinct), 0));
    }
    CHECK(distinct_root_count(ExactCurve::from_roots(er)) == distinct);
    CHECK(distinct_root_count(FloatCurve::from_roots(fr)) == distinct);
  }
}

TEST_CASE("genericity_check examples") {
  const auto z2t = binomial_curve(2, 1, 1);
  CHECK(bezoutiant(z2t).delta(2) == ex_mono(4, 1, 16));
  const auto g = genericity_check(z2t);
  CHECK(g.generic());
  CHECK(g.k == 2);
  CHECK(g.order == 1);
  const auto c = genericity_check(ExactCurve::from_roots({ej({1}), ej({2}), ej({3})}));
  CHECK(c.k == 3);
  CHECK(c.order == 0);
  // characteristic coefficients of a flat matrix: every jet is zero, tails unknown
  const FloatCurve flat({FloatJet(8, 0.0, false), FloatJet(8, 0.0, false)});
  const auto u = genericity_check(flat);
  CHECK_FALSE(u.generic());
  CHECK(u.truncation == 8);
}

TEST_CASE("multiplicity_equivalence_check examples") {
  auto e1 = multiplicity_equivalence_check(binomial_curve(2, 1, 2), 1);
  CHECK(e1.lhs);
  CHECK(e1.rhs);
  auto e2 = multiplicity_equivalence_check(binomial_curve(2, 1, 1), 1);
  CHECK_FALSE(e2.lhs);
  CHECK_FALSE(e2.rhs);
  const ExactCurve z2({ExactJet(8), ExactJet(8)});
  for (int r = 1; r <= 3; ++r) {
    auto e = multiplicity_equivalence_check(z2, r);
    CHECK(e.lhs);
    CHECK(e.rhs);
  }
  const FloatCurve flat({FloatJet(4, 0.0, false), FloatJet(4, 0.0, false)});
  CHECK_THROWS_AS(multiplicity_equivalence_check(flat, 3), UndeterminedOrder);
}

TEST_CASE("quadratic lift coordinates") {
  const FloatJet t = fj({0.0, 1.0}, 4);
  const auto q = quadratic_lift_coordinates(t, 1);
  CHECK(q[0].is_zero());
  CHECK(q[1].is_zero());
  CHECK(max_diff(q[2], fj({0.0, 2.0}, 4)) == 0.0);
  CHECK(q[3].is_zero());
  CHECK(q[4].is_zero());
  const auto neg = quadratic_lift_coordinates(t, -1);
  CHECK(neg[2].is_zero());
  CHECK(max_diff(neg[3], fj({0.0, -2.0}, 4)) == 0.0);
  for (const auto& x : quadratic_lift_coordinates(fj({0.0}, 3))) CHECK(x.is_zero());
  CHECK(quadratic_lift_coordinates(Complex(0.0, 1.0)) == std::array<double, 5>{0, 0, 1, 1, 1});
  CHECK(quadratic_lift_coordinates(Complex(0.0, 0.0)) == std::array<double, 5>{0, 0, 0, 0, 0});
  CHECK_THROWS_AS(quadratic_lift_coordinates(fj({0.0, Complex(0, 1)}), 1), UnsupportedInJetMode);
}

TEST_CASE("polarization coordinates") {
  const auto tau = polarization_tau({2.0}, {3.0});
  CHECK(tau == std::vector<double>{2.0, 3.0});
  CHECK(tau_inverse_T(tau, 1)[0] == Complex(2.0, 3.0));
  for (double x : polarization_tau({0.0, 0.0}, {0.0, 0.0})) CHECK(x == 0.0);
  const auto s = tau_inverse_T(polarization_tau({1.0, 1.0}, {1.0, -1.0}), 2);
  CHECK(std::abs(s[0] - Complex(2.0, 0.0)) < 1e-14);
  CHECK(std::abs(s[1]) < 1e-14);
  const auto pairs = tau_index_pairs(3);
  CHECK(pairs.front() == std::pair<int, int>{1, 0});
  CHECK(pairs[2] == std::pair<int, int>{2, 0});
  CHECK(pairs[4] == std::pair<int, int>{1, 1});
  CHECK(pairs.size() == 9);
}

TEST_CASE("tau roundtrip on random points") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = static_cast<int>(rand_int(1, 5));
    std::vector<double> x, y;
    for (int k = 0; k < n; ++k) {
      x.push_back(rand_real(-2, 2));
      y.push_back(rand_real(-2, 2));
    }
    const auto s = tau_inverse_T(polarization_tau(x, y), n);
    for (int m = 1; m <= n; ++m) {
      Complex direct = 0.0;
      for (int k = 0; k < n; ++k) direct += std::pow(Complex(x[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(k)]), m);
      CHECK(std::abs(s[static_cast<std::size_t>(m - 1)] - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("curve helpers") {
  const auto p = ExactCurve::from_roots({ej({1, 1}), ej({-1, 1})});  // (z - 1 - t)(z + 1 - t)
  CHECK(p.a(1) == ej({0, 2}));
  CHECK(p.a(2) == ej({-1, 0}));  // order follows the roots
  CHECK(p.standard(1) == ej({0, -2}));
  CHECK(p.evaluate(ej({1, 1})).is_zero());
  CHECK(p.compose_power(2, -1).a(1) == ej({0, 0, -2}));
  CHECK(binomial(5, 2) == 10);
}
