#include "core/linalg.hpp"

#include "core/error.hpp"

namespace swa::linalg {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double threshold = tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  return rank;
}

Eigen::MatrixXd pseudo_inverse_svd(const Eigen::MatrixXd& a, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  const double threshold = sv.size() > 0 ? tol * sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd normal = a.transpose() * a;
  if (normal.rows() > 0 && numerical_rank(normal) == normal.rows()) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() == Eigen::Success) return ldlt.solve(a.transpose());
  }
  return pseudo_inverse_svd(a);
}

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success || !m.allFinite()) {
    fail(ErrorCode::kSingularMatrix, "matrix is not symmetric positive definite");
  }
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace swa::linalg
