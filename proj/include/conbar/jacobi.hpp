#pragma once

#include <Eigen/Dense>

// Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.
// The matrices here are d x d with d the ambient dimension, so simplicity
// beats asymptotics.

namespace conbar {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, matching order; empty unless requested
};

// Sweeps Givens rotations until the off-diagonal Frobenius norm drops to
// `tol`. Throws std::invalid_argument for non-square or non-symmetric input.
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double tol = 1e-14, bool with_vectors = false);

double smallest_eigenvalue(const Eigen::MatrixXd& a);

// Spectral norm of a symmetric matrix (max |eigenvalue|).
double sym_operator_norm(const Eigen::MatrixXd& a);

}  // namespace conbar
