#include "support.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace rootflow;
using namespace rootflow::testing;

namespace {

constexpr int kOrder = 8;

ExactJet t_times(long c) { return ex_mono(c, 1, kOrder); }
ExactJet zero() { return ExactJet(kOrder); }

Eigen::MatrixXcd random_unitary(int n) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rand_complex();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ();
}

// U diag(d) U*, with tails of unknown sign so that float zero tests stay honest.
FloatMatrix conjugated_diagonal(const Eigen::MatrixXcd& u, const std::vector<FloatJet>& d) {
  const int n = static_cast<int>(d.size());
  std::vector<FloatJet> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FloatJet acc(d.front().order(), 0.0, false);
      for (int k = 0; k < n; ++k) acc += d[static_cast<std::size_t>(k)] * (u(i, k) * std::conj(u(j, k)));
      acc.set_polynomial(false);
      e.push_back(acc);
    }
  return FloatMatrix(n, std::move(e));
}

FloatJet conj(const FloatJet& f) {
  FloatJet r = f;
  for (int m = 0; m <= f.order(); ++m) r[m] = std::conj(f[m]);
  return r;
}

// <v, w> as a jet in the real parameter.
FloatJet inner(const JetVector<Complex>& v, const JetVector<Complex>& w) {
  FloatJet s(std::min(v.front().order(), w.front().order()));
  for (std::size_t i = 0; i < v.size(); ++i) s += conj(v[i]) * w[i];
  return s;
}

}  // namespace

TEST_CASE("normality_check examples") {
  CHECK(normality_check(ExactMatrix(2, {zero(), t_times(1), t_times(1), zero()})));
  CHECK_FALSE(normality_check(ExactMatrix(2, {zero(), t_times(1), zero(), zero()})));
  CHECK(normality_check(ExactMatrix::identity(3, kOrder)));
  // skew-Hermitian is normal too
  CHECK(normality_check(ExactMatrix(2, {zero(), t_times(1), -t_times(1), zero()})));
}

TEST_CASE("char_poly examples") {
  const auto chi = char_poly(ExactMatrix(2, {zero(), t_times(1), t_times(1), zero()}));
  CHECK(chi.a(1).is_zero());
  CHECK(chi.a(2) == -ex_mono(1, 2, kOrder));
  const auto d = char_poly(ExactMatrix(2, {t_times(1), zero(), zero(), t_times(2)}));
  CHECK(d.a(1) == t_times(3));
  CHECK(d.a(2) == ex_mono(2, 2, kOrder));
}

TEST_CASE("char_poly equals sums of principal minors") {
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<Complex>> m(3, std::vector<Complex>(3));
    for (auto& row : m)
      for (auto& x : row) x = rand_complex();
    auto minor2 = [&](int i, int j) { return m[i][i] * m[j][j] - m[i][j] * m[j][i]; };
    const Complex tr = m[0][0] + m[1][1] + m[2][2];
    const Complex s2 = minor2(0, 1) + minor2(0, 2) + minor2(1, 2);
    const Complex det = m[0][0] * minor2(1, 2) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    const auto a = char_poly_values(m);
    CHECK(std::abs(a[0] - tr) < 1e-12);
    CHECK(std::abs(a[1] - s2) < 1e-12);
    CHECK(std::abs(a[2] - det) < 1e-12);
    // the jet version agrees at h = 0
    std::vector<FloatJet> e;
    for (const auto& row : m)
      for (const auto& x : row) e.push_back(fj({x}, 2));
    const auto chi = char_poly(FloatMatrix(3, std::move(e)));
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(chi.a(k)[0] - a[static_cast<std::size_t>(k - 1)]) < 1e-12);
  }
}

TEST_CASE("matrix_genericity_check examples") {
  const auto g = matrix_genericity_check(ExactMatrix(2, {zero(), t_times(1), t_times(1), zero()}));
  CHECK(g.generic());
  CHECK(g.k == 2);
  CHECK(g.order == 2);
  const auto s = matrix_genericity_check(ExactMatrix(2, {t_times(1), zero(), zero(), t_times(1)}));
  CHECK(s.k == 1);
  const FloatMatrix flat(2, std::vector<FloatJet>(4, FloatJet(kOrder, 0.0, false)));
  CHECK_FALSE(matrix_genericity_check(flat).generic());
}

TEST_CASE("kernel_frame examples") {
  const auto f = kernel_frame(ExactMatrix(2, {ej({1}, kOrder), zero(), zero(), zero()}));
  REQUIRE(f.basis.size() == 1);
  CHECK(f.free == std::vector<int>{1});
  CHECK(f.pivots == std::vector<int>{0});
  CHECK(f.basis[0][0].is_zero());
  CHECK(f.basis[0][1] == ej({1}, kOrder));
  // [[1, t], [t, t^2]] has rank one everywhere; kernel (-t, 1)
  const auto g = kernel_frame(ExactMatrix(2, {ej({1}, kOrder), t_times(1), t_times(1), ex_mono(1, 2, kOrder)}));
  REQUIRE(g.basis.size() == 1);
  CHECK(g.basis[0][0] == -t_times(1));
  CHECK(g.basis[0][1] == ej({1}, kOrder));
  CHECK_THROWS_AS(kernel_frame(ExactMatrix(2, {t_times(1), zero(), zero(), zero()})), RankDrop);
}

TEST_CASE("eigen examples") {
  SUBCASE("[[0, t], [t, 0]]") {
    const ExactMatrix a(2, {zero(), t_times(1), t_times(1), zero()});
    const auto r = eigen_desingularize(a);
    CHECK(r.plus.N == 1);
    std::vector<Cyclo> lin;
    for (const auto& e : r.plus.eigenvalues) lin.push_back(e[1]);
    CHECK(((lin[0] == Cyclo(1) && lin[1] == Cyclo(-1)) || (lin[0] == Cyclo(-1) && lin[1] == Cyclo(1))));
    const Cyclo half(mpq_class(1, 2));
    for (const auto& v : r.plus.eigenvectors) {
      CHECK(v[0][0] * v[0][0] == half);
      CHECK(v[1][0] * v[1][0] == half);
    }
    for (const auto& res : eigen_residual(a, r.plus))
      for (const auto& x : res) CHECK(x.is_zero());
  }
  SUBCASE("diag(t, 2t)") {
    const ExactMatrix a(2, {t_times(1), zero(), zero(), t_times(2)});
    const auto r = eigen_desingularize_branch(a, 1);
    CHECK(r.N == 1);
    std::vector<Cyclo> lin;
    for (const auto& e : r.eigenvalues) lin.push_back(e[1]);
    CHECK(((lin[0] == Cyclo(1) && lin[1] == Cyclo(2)) || (lin[0] == Cyclo(2) && lin[1] == Cyclo(1))));
    for (const auto& res : eigen_residual(a, r))
      for (const auto& x : res) CHECK(x.is_zero());
  }
  SUBCASE("[[0, t], [t, t]]") {
    const ExactMatrix a(2, {zero(), t_times(1), t_times(1), t_times(1)});
    const auto r = eigen_desingularize_branch(a, 1);
    REQUIRE(r.eigenvalues.size() == 2);
    // t (1 +- sqrt 5) / 2: the two slopes sum to 1 and multiply to -1
    CHECK(r.eigenvalues[0][1] + r.eigenvalues[1][1] == Cyclo(1));
    CHECK(r.eigenvalues[0][1] * r.eigenvalues[1][1] == Cyclo(-1));
    for (const auto& res : eigen_residual(a, r))
      for (const auto& x : res) CHECK(x.is_zero());
  }
  SUBCASE("non-normal input") {
    CHECK_THROWS_AS(eigen_desingularize(ExactMatrix(2, {zero(), t_times(1), zero(), zero()})), NotNormal);
  }
}

TEST_CASE("eigenpairs of t B match those of B") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3;
    const auto u = random_unitary(n);
    std::vector<Complex> lambda;
    std::vector<FloatJet> d;
    for (int k = 0; k < n; ++k) {
      lambda.push_back(Complex(k + 1.0, rand_real(-0.5, 0.5)));
      d.push_back(fj({0.0, lambda.back()}, kOrder));
    }
    const auto r = eigen_desingularize_branch(conjugated_diagonal(u, d), 1);
    std::vector<Complex> slopes;
    for (const auto& e : r.eigenvalues) slopes.push_back(e[1]);
    CHECK(same_multiset(slopes, lambda, 1e-9));
    for (std::size_t j = 0; j < r.eigenvectors.size(); ++j) {
      // the eigenvector at h = 0 is a column of U up to phase
      double best = 0.0;
      for (int k = 0; k < n; ++k) {
        Complex s = 0.0;
        for (int i = 0; i < n; ++i) s += std::conj(u(i, k)) * r.eigenvectors[j][static_cast<std::size_t>(i)][0];
        best = std::max(best, std::abs(s));
      }
      CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("eigenvector jets are orthonormal") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = static_cast<int>(rand_int(2, 4));
    const auto u = random_unitary(n);
    std::vector<FloatJet> d;
    // rounding grows like (|A'| / gap)^m in coefficient m, so keep the gaps near 1
    for (int k = 0; k < n; ++k) d.push_back(fj({Complex(k, rand_real(-0.3, 0.3)), rand_complex(), rand_complex()}, kOrder));
    const auto r = eigen_desingularize_branch(conjugated_diagonal(u, d), 1);
    for (std::size_t i = 0; i < r.eigenvectors.size(); ++i)
      for (std::size_t j = 0; j < r.eigenvectors.size(); ++j) {
        const FloatJet g = inner(r.eigenvectors[i], r.eigenvectors[j]);
        CHECK(max_diff(g, fj({i == j ? 1.0 : 0.0}, g.order())) <= 1e-10);
      }
    for (const auto& res : eigen_residual(conjugated_diagonal(u, d), r))
      for (const auto& x : res) CHECK(x.max_abs() <= 1e-8);
  }
}

TEST_CASE("eigen_track examples") {
  const auto grid = uniform_grid(-1.0, 1.0, 201);
  std::vector<std::vector<std::vector<Complex>>> samples;
  for (double t : grid) samples.push_back({{0.0, t}, {t, 0.0}});
  const auto tr = eigen_track(grid, samples);
  CHECK(tr.max_normality_defect <= 1e-14);
  REQUIRE(tr.eigenvalues.count() == 2);
  for (double v : tr.eigenvector_variation) CHECK(v <= 1e-9);

  const std::vector<double> g2 = {0.0, 1.0};
  CHECK(eigen_track(g2, {{{0.0, 1.0}, {0.0, 0.0}}, {{0.0, 1.0}, {0.0, 0.0}}}).max_normality_defect > 0.5);
}

TEST_CASE("eigenvectors of a smooth flat curve rotate without bound") {
  // e^(-1/t^2) times a reflection through angle 1/t
  const auto grid = uniform_grid(0.05, 1.0, 4001);
  std::vector<std::vector<std::vector<Complex>>> samples;
  for (double t : grid) {
    const double e = std::exp(-1.0 / (t * t)), c = std::cos(2.0 / t), s = std::sin(2.0 / t);
    samples.push_back({{e * c, e * s}, {e * s, -e * c}});
  }
  const auto tr = eigen_track(grid, samples);
  for (double v : tr.eigenvector_variation) CHECK(v == doctest::Approx(19.0).epsilon(1e-3));
  for (const auto& path : tr.eigenvalues.paths)
    CHECK(std::abs(std::abs(path.back()) - std::exp(-1.0)) <= 1e-12);
}
