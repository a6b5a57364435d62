#pragma once

// Orthonormal self-adjoint basis of M_sa under <a, b> = tau(a b).
//
// Ordering is block-major. Within a block of dimension d and weight w the
// generalized Gell-Mann matrices are used, each divided by sqrt(w):
//   identity 1/sqrt(d) first,
//   symmetric (E_jk + E_kj)/sqrt(2) for j < k in lexicographic order,
//   antisymmetric (-i E_jk + i E_kj)/sqrt(2) for j < k in the same order,
//   diagonal diag(1, .., 1, -l, 0, ..)/sqrt(l(l+1)) for l = 1 .. d-1.
// Coordinates of x are c_k = tau(b_k x); they are real iff x is self-adjoint.

#include <vector>

#include <Eigen/Dense>

#include "ergomix/algebra.hpp"

namespace ergomix {

Eigen::VectorXcd coordinates(const Element& x);
/// Real coordinates of the self-adjoint part of x.
Eigen::VectorXd sa_coordinates(const Element& x);

Element from_coordinates(const AlgebraShape& shape, const Eigen::VectorXcd& c);
Element from_coordinates(const AlgebraShape& shape, const Eigen::VectorXd& c);

Element basis_element(const AlgebraShape& shape, int k);

/// Coordinates of the unit; tau(x) = identity_coordinates . c(x).
Eigen::VectorXd identity_coordinates(const AlgebraShape& shape);

/// Orthonormal columns spanning the traceless subspace X = {tau(x) = 0}
/// inside coordinate space (N x (N - 1)).
Eigen::MatrixXd traceless_basis(const AlgebraShape& shape);

}  // namespace ergomix
