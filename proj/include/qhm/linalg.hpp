#pragma once

#include <Eigen/Dense>

namespace qhm::linalg {

/// Eigendecomposition of a real symmetric matrix. Eigenvalues are sorted in
/// decreasing order; column i of `vectors` pairs with `values[i]`.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Cyclic Jacobi rotations. Only the upper triangle of `a` is read.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 64);

/// Largest |eigenvalue|, or 0 for an empty spectrum.
double spectral_scale(const Eigen::VectorXd& eigenvalues);

/// Count of eigenvalues with |λ| > rel_tol · max|λ|.
int numerical_rank(const Eigen::VectorXd& eigenvalues, double rel_tol);

/// Minimum-norm least-squares solution of A x = b, where `eig` decomposes the
/// symmetric matrix A. Eigenvalues at or below rel_tol · max|λ| are treated
/// as zero.
Eigen::VectorXd pinv_solve(const SymmetricEigen& eig, const Eigen::VectorXd& b,
                           double rel_tol);

/// Orthonormal basis (n × (n−1)) of the mass-zero hyperplane {x : Σxᵢ = 0}.
/// Columns are the normalized Helmert contrasts.
Eigen::MatrixXd mass_zero_basis(Eigen::Index n);

/// Rank of the affine hull of the rows of `points` (number of points minus
/// one when affinely independent). Uses singular values of the centered rows.
int affine_rank(const Eigen::MatrixXd& points, double rel_tol);

}  // namespace qhm::linalg
