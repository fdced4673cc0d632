#ifndef ROOTFLOW_ROOTS_HPP
#define ROOTFLOW_ROOTS_HPP

#include "rootflow/polycurve.hpp"

#include <vector>

namespace rootflow {

// Roots of a monic polynomial given by ascending coefficients c_0..c_{n-1}, 1.
// Companion matrix eigenvalues followed by one guarded Aberth correction.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& ascending);

// Roots of z^n + sum_j (-1)^j a_j z^{n-j} from a_1..a_n.
std::vector<Complex> roots_at(const std::vector<Complex>& a);

// Exact roots (with multiplicity) of a monic polynomial over the cyclotomic
// field. Throws NotRepresentable when a root is not found inside the field.
std::vector<Cyclo> exact_polynomial_roots(const std::vector<Cyclo>& ascending);

// Single-linkage clusters of points: members of a cluster are chained by
// steps of length <= tol. Clusters are listed by their smallest member index.
std::vector<std::vector<int>> single_linkage_clusters(const std::vector<Complex>& pts, double tol);

template <class F>
struct ConstantRoots {
  std::vector<F> roots;                  // roots of P at h = 0, with multiplicity
  std::vector<std::vector<int>> clusters;  // indices into roots
};

// Roots of the constant part grouped into clusters: exact equality in exact
// mode, single linkage at max(sqrt(eps), cluster_tol) * max(1, scale) in float.
template <class F>
ConstantRoots<F> constant_roots(const PolyCurve<F>& p, const Tolerances& tol);

// Dense polynomial helpers over the exact field (ascending coefficients).
std::vector<Cyclo> exact_poly_gcd(std::vector<Cyclo> a, std::vector<Cyclo> b);
std::vector<Cyclo> exact_poly_divide(const std::vector<Cyclo>& num, const std::vector<Cyclo>& den);
Cyclo exact_poly_eval(const std::vector<Cyclo>& p, const Cyclo& z);

}  // namespace rootflow

#endif  // ROOTFLOW_ROOTS_HPP
