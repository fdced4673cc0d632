#ifndef ROOTFLOW_NORMALCURVE_HPP
#define ROOTFLOW_NORMALCURVE_HPP

#include "rootflow/desingularize.hpp"
#include "rootflow/polycurve.hpp"
#include "rootflow/tracking.hpp"

#include <string>
#include <vector>

namespace rootflow {

// Square matrix of jets, row-major.
template <class F>
class MatrixCurve {
 public:
  MatrixCurve() = default;
  MatrixCurve(int n, std::vector<Jet<F>> entries);
  static MatrixCurve zero(int n, int order, double t0 = 0.0);
  static MatrixCurve identity(int n, int order, double t0 = 0.0);

  int dim() const { return n_; }
  int order() const;
  double t0() const { return e_.empty() ? 0.0 : e_.front().t0(); }
  const Jet<F>& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  Jet<F>& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  const std::vector<Jet<F>>& entries() const { return e_; }

  MatrixCurve adjoint() const;  // conjugate transpose
  MatrixCurve compose_power(int d, int sign) const;
  MatrixCurve truncated(int order) const;
  double max_abs() const;

  friend MatrixCurve operator*(const MatrixCurve& a, const MatrixCurve& b) { return a.multiply(b); }
  friend MatrixCurve operator-(const MatrixCurve& a, const MatrixCurve& b) { return a.add(b, -1); }
  friend MatrixCurve operator+(const MatrixCurve& a, const MatrixCurve& b) { return a.add(b, 1); }

 private:
  MatrixCurve multiply(const MatrixCurve& b) const;
  MatrixCurve add(const MatrixCurve& b, int sign) const;

  int n_ = 0;
  std::vector<Jet<F>> e_;
};

using ExactMatrix = MatrixCurve<Cyclo>;
using FloatMatrix = MatrixCurve<Complex>;

// Column vector of jets.
template <class F>
using JetVector = std::vector<Jet<F>>;

template <class F>
bool normality_check(const MatrixCurve<F>& a, double eps = kDefaultEps);

// a_j(t) = Trace(Lambda^j A(t)), so that det(z - A) = z^n + sum (-1)^j a_j z^{n-j}.
// Division-free (Berkowitz), valid in jet arithmetic.
template <class F>
PolyCurve<F> char_poly(const MatrixCurve<F>& a);

// Characteristic coefficients a_1..a_n of a constant complex matrix.
std::vector<Complex> char_poly_values(const std::vector<std::vector<Complex>>& m);

template <class F>
Genericity matrix_genericity_check(const MatrixCurve<F>& a, double eps = kDefaultEps);

template <class F>
struct FrameBundle {
  std::vector<JetVector<F>> basis;  // kernel vectors, identity on the free coordinates
  std::vector<int> pivots;          // pivot column chosen at h = 0 for each eliminated row
  std::vector<int> free;            // free columns, one per basis vector
};

// Kernel of a constant-rank jet matrix by elimination with pivots frozen at h = 0.
// Throws RankDrop when the rank of B(h) exceeds the rank of B(0).
template <class F>
FrameBundle<F> kernel_frame(const MatrixCurve<F>& b, double eps = kDefaultEps);

struct EigenStep {
  std::string kind;  // "eigenvalues", "group", "shift", "rescale", "constant"
  int depth = 0;
  int dimension = 0;
  int N = 1;         // substitution exponent introduced at this step
  int m = 0;         // rescale order
  std::string note;
};

template <class F>
struct EigenResult {
  int N = 1;
  int branch = 1;
  std::vector<Jet<F>> eigenvalues;
  std::vector<JetVector<F>> eigenvectors;  // eigenvectors[j] pairs with eigenvalues[j]
  std::vector<EigenStep> trace;
};

template <class F>
struct EigenPair {
  EigenResult<F> plus;
  EigenResult<F> minus;
};

template <class F>
EigenResult<F> eigen_desingularize_branch(const MatrixCurve<F>& a, int sign, const Tolerances& tol = {});

template <class F>
EigenPair<F> eigen_desingularize(const MatrixCurve<F>& a, const Tolerances& tol = {});

// A(t0 + branch h^N) v_j - mu_j v_j for every eigenpair.
template <class F>
std::vector<JetVector<F>> eigen_residual(const MatrixCurve<F>& a, const EigenResult<F>& r);

struct EigenTrack {
  RootPaths eigenvalues;
  // eigenvectors[j][i] = unit eigenvector of path j at grid[i]
  std::vector<std::vector<std::vector<Complex>>> eigenvectors;
  std::vector<double> eigenvector_variation;  // total variation per eigenvector path
  double max_normality_defect = 0.0;          // max ||A A* - A* A|| / ||A||^2 over the samples
  std::vector<std::string> warnings;
};

// Eigenvalue and eigenvector paths of sampled matrices. Eigenvectors are
// continued by maximal overlap inside each eigenvalue cluster and phase aligned
// so that <v_prev, v_next> >= 0.
EigenTrack eigen_track(const std::vector<double>& grid, const std::vector<std::vector<std::vector<Complex>>>& samples,
                       double eps = kDefaultEps);

}  // namespace rootflow

#endif  // ROOTFLOW_NORMALCURVE_HPP
