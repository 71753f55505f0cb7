#include "analysis/observability.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/linalg.hpp"

namespace swa::analysis {
namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd sv = linalg::singular_values(m);
  return sv.size() > 0 ? sv(0) : 0.0;
}

}  // namespace

CombinedSystem build_combined_system(int n, double dt) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "combined system needs at least 2 UAVs");
  if (!std::isfinite(dt) || dt <= 0.0) fail(ErrorCode::kInvalidArgument, "dt must be positive");

  CombinedSystem sys;
  sys.n = n;
  sys.dt = dt;
  const int dim = 4 * n;
  sys.transition = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i < n; ++i) {
    sys.transition.block(4 * i, 4 * i + 2, 2, 2) = dt * Eigen::Matrix2d::Identity();
  }

  sys.measurement = Eigen::MatrixXd::Zero(2 * n * (n - 1), dim);
  int row = 0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (k == l) continue;
      // z^{kl} = r^k - r^l
      sys.measurement.block(row, 4 * k, 2, 2) = Eigen::Matrix2d::Identity();
      sys.measurement.block(row, 4 * l, 2, 2) = -Eigen::Matrix2d::Identity();
      row += 2;
    }
  }
  return sys;
}

CombinedSystem with_absolute_position(const CombinedSystem& sys, int index) {
  if (index < 0 || index >= sys.n) fail(ErrorCode::kInvalidArgument, "UAV index out of range");
  CombinedSystem out = sys;
  const auto rows = sys.measurement.rows();
  out.measurement.conservativeResize(rows + 2, Eigen::NoChange);
  out.measurement.bottomRows(2).setZero();
  out.measurement.block(rows, 4 * index, 2, 2) = Eigen::Matrix2d::Identity();
  return out;
}

Eigen::MatrixXd observability_matrix(const CombinedSystem& sys) {
  const auto dim = sys.transition.rows();
  const auto m = sys.measurement.rows();
  Eigen::MatrixXd o(m * dim, dim);
  Eigen::MatrixXd block = sys.measurement;
  for (Eigen::Index k = 0; k < dim; ++k) {
    o.middleRows(k * m, m) = block;
    block = block * sys.transition;
  }
  return o;
}

int observability_rank(const CombinedSystem& sys) {
  return linalg::numerical_rank(observability_matrix(sys));
}

Eigen::MatrixXd uniform_translation_basis(int n) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(4 * n, 4);
  // Column j is 1_n (x) e_j.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) basis(4 * i + j, j) = 1.0;
  }
  return basis;
}

bool in_null_space(const Eigen::MatrixXd& o, const Eigen::VectorXd& v, double tol) {
  return (o * v).norm() <= tol * spectral_norm(o) * v.norm();
}

NullSpaceCheck unobservable_basis_check(const CombinedSystem& sys) {
  const Eigen::MatrixXd o = observability_matrix(sys);
  const double o_norm = spectral_norm(o);
  const Eigen::MatrixXd basis = uniform_translation_basis(sys.n);

  NullSpaceCheck out;
  out.rank = linalg::numerical_rank(o);
  out.nullity = static_cast<int>(o.cols()) - out.rank;
  out.basis_in_null_space = true;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const double ratio = (o * basis.col(j)).norm() / (o_norm * basis.col(j).norm());
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (!in_null_space(o, basis.col(j))) out.basis_in_null_space = false;
  }
  out.spans_null_space = out.nullity == basis.cols() &&
                         linalg::numerical_rank(basis) == basis.cols() &&
                         out.basis_in_null_space;
  return out;
}

}  // namespace swa::analysis
