#pragma once

#include <Eigen/Dense>

namespace swa::linalg {

inline constexpr double kRankTolerance = 1e-9;

// Singular values in descending order.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

// Number of singular values above tol * sigma_max; 0 for an empty or zero matrix.
int numerical_rank(const Eigen::MatrixXd& m, double tol = kRankTolerance);

// Moore-Penrose pseudoinverse through the normal equations (A^T A)^-1 A^T.
// Falls back to pseudo_inverse_svd when A^T A is singular within tolerance.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a);

// SVD-based pseudoinverse, valid for any shape and rank.
Eigen::MatrixXd pseudo_inverse_svd(const Eigen::MatrixXd& a, double tol = kRankTolerance);

// Inverse of a small symmetric positive-definite matrix; throws kSingularMatrix
// when the Cholesky factorization fails.
Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& m);

template <typename Derived>
void symmetrize(Eigen::MatrixBase<Derived>& m) {
  m = (0.5 * (m + m.transpose())).eval();
}

}  // namespace swa::linalg
