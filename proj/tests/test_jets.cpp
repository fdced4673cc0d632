#include "support.hpp"

using namespace rootflow;
using namespace rootflow::testing;

TEST_CASE("jet arithmetic examples") {
  CHECK(ej({0, 1}, 2) * ej({0, 1}, 2) == ej({0, 0, 1}));
  CHECK(ej({1, 2}) + ej({3, -2}) == ej({4, 0}));
  CHECK(ej({1, 1, 0}) * ej({1, -1, 0}) == ej({1, 0, -1}));
  CHECK(ej({1, 2}) * Cyclo(3) == ej({3, 6}));
}

TEST_CASE("mixed orders truncate to the smaller one") {
  const ExactJet s = ej({1, 1, 1, 1}) + ej({1, 1, 1});
  CHECK(s.order() == 2);
  CHECK(s == ej({2, 2, 2}));
  CHECK((ej({1, 1, 1, 1}) * ej({1, 1})).order() == 1);
}

TEST_CASE("polynomial flag") {
  CHECK(ej({0, 0}).identically_zero());
  const FloatJet flat(3, 0.0, false);
  CHECK(flat.is_zero());
  CHECK_FALSE(flat.identically_zero());
  // t * t at K = 1 loses the t^2 term
  CHECK_FALSE((ej({0, 1}) * ej({0, 1})).polynomial());
  CHECK(ex_mono(1, 5, 3).is_zero());
  CHECK_FALSE(ex_mono(1, 5, 3).polynomial());
}

TEST_CASE("jet_order examples") {
  CHECK(jet_order(ej({0, 0, 3, 1})) == 2);
  CHECK_FALSE(jet_order(ej({0, 0, 0})).has_value());
  CHECK_FALSE(jet_order(fj({0.0, 0.0, 0.0})).has_value());
  CHECK(jet_order(ex_mono(1, 3, 5)) == 3);
  CHECK(jet_order(fj({1e-14, 1e-13, 1.0})) == 2);
}

TEST_CASE("shift_divide examples") {
  CHECK(shift_divide(ej({0, 0, 4, 1}), 2) == ej({4, 1}));
  CHECK(shift_divide(ej({0, 1}), 1) == ej({1}));
  CHECK(shift_divide(ej({0, 0, 0, 1, 2}), 3) == ej({1, 2}));
  CHECK_THROWS_AS(shift_divide(ej({0, 1, 2}), 2), OrderTooLow);
  CHECK_THROWS_AS(shift_divide(ej({0, 0}), 3), TruncationExhausted);
}

TEST_CASE("compose_power examples") {
  CHECK(compose_power(ej({0, 1}), 2, 1) == ej({0, 0, 1}));
  CHECK(compose_power(ej({0, 1}), 1, -1) == ej({0, -1}));
  CHECK(compose_power(ej({1, 0, 1}), 3, 1) == ej({1, 0, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(compose_power(ej({1}), 0, 1), PreconditionViolated);
}

TEST_CASE("reciprocal examples") {
  CHECK(reciprocal(ej({1, 0, 0, 0})) == ej({1, 0, 0, 0}));
  CHECK(reciprocal(ej({1, 1})) == ej({1, -1}));
  ExactJet half(2);
  half[0] = Cyclo(mpq_class(1, 2));
  CHECK(reciprocal(ej({2, 0, 0})) == half);
  CHECK_THROWS_AS(reciprocal(ej({0, 1})), NotInvertible);
}

TEST_CASE("ring axioms hold exactly on random exact jets") {
  for (int trial = 0; trial < 30; ++trial) {
    ExactJet a(4), b(4), c(4);
    for (int m = 0; m <= 4; ++m) {
      a[m] = rand_gaussian();
      b[m] = rand_gaussian();
      c[m] = rand_gaussian();
    }
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a * reciprocal(ej({1}, 4) + ex_mono(1, 1, 4)) * (ej({1}, 4) + ex_mono(1, 1, 4)) == a);
  }
}

TEST_CASE("ring axioms hold to 1e-9 on random float jets") {
  for (int trial = 0; trial < 30; ++trial) {
    FloatJet a(6), b(6), c(6);
    for (int m = 0; m <= 6; ++m) {
      a[m] = rand_complex();
      b[m] = rand_complex();
      c[m] = rand_complex();
    }
    CHECK(max_diff((a * b) * c, a * (b * c)) <= 1e-9);
    CHECK(max_diff(a * (b + c), a * b + a * c) <= 1e-9);
  }
}

TEST_CASE("order properties") {
  for (int trial = 0; trial < 30; ++trial) {
    const int K = 8;
    const int p = static_cast<int>(rand_int(0, 3)), q = static_cast<int>(rand_int(0, 3));
    ExactJet f(K), g(K);
    for (int m = p; m <= K; ++m) f[m] = rand_gaussian();
    for (int m = q; m <= K; ++m) g[m] = rand_gaussian();
    if (f[p].is_zero()) f[p] = Cyclo(1);
    if (g[q].is_zero()) g[q] = Cyclo(1);
    // shift_divide then multiply by t^p reproduces f up to K - p
    CHECK((shift_divide(f, p) * ex_mono(1, p, K)).truncated(K - p) == f.truncated(K - p));
    CHECK(jet_order(f * g) == p + q);
    const int d = static_cast<int>(rand_int(1, 2));
    const int sign = rand_int(0, 1) ? 1 : -1;
    CHECK(jet_order(compose_power(f, d, sign)) == d * p);
  }
}

TEST_CASE("cyclotomic field") {
  const Cyclo w = Cyclo::root_of_unity(1);
  Cyclo p(1);
  for (int i = 0; i < 120; ++i) p *= w;
  CHECK(p == Cyclo(1));
  CHECK(Cyclo::imaginary_unit() * Cyclo::imaginary_unit() == Cyclo(-1));
  const Cyclo x = Cyclo::gaussian(mpq_class(3, 4), mpq_class(-2, 5));
  CHECK(x * x.inverse() == Cyclo(1));
  CHECK(std::abs(x.approx() - Complex(0.75, -0.4)) < 1e-15);
  CHECK(x.conj() == Cyclo::gaussian(mpq_class(3, 4), mpq_class(2, 5)));
  CHECK(Cyclo(mpq_class(6, 4)) == Cyclo(mpq_class(3, 2)));
  CHECK(x.as_gaussian().has_value());
  CHECK_FALSE((w + Cyclo(1)).as_rational().has_value());
}

TEST_CASE("exact square roots") {
  for (const Cyclo& x : {Cyclo(2), Cyclo(-3), Cyclo(mpq_class(9, 4)), Cyclo::imaginary_unit(), Cyclo(5)}) {
    const auto s = exact_sqrt(x);
    REQUIRE(s.has_value());
    CHECK(*s * *s == x);
  }
  // (5 + sqrt 5) / 2 = (2 sin 72 deg)^2
  const Cyclo r5 = *exact_sqrt(Cyclo(5));
  const Cyclo v = (Cyclo(5) + r5) * Cyclo(mpq_class(1, 2));
  const auto s = exact_sqrt(v);
  REQUIRE(s.has_value());
  CHECK(*s * *s == v);
  // w itself has no square root in the field
  CHECK_FALSE(exact_sqrt(Cyclo::root_of_unity(1)).has_value());
  CHECK_FALSE(exact_sqrt(Cyclo(7)).has_value());
}
