#pragma once

// Independent reference implementations used by unit and acceptance tests.
// They share no code with the library beyond basic types.

#include <vector>

#include <Eigen/Dense>

#include "core/types.hpp"

namespace swa::oracle {

// Minimizer of sum((|p - c|^2 - k)^2) over center c and free constant k,
// found by successively refined grid search, restarted once from its own
// result so narrow valleys (clustered points) are followed to the bottom. For
// a fixed center the best k is the mean squared distance.
inline Vec2 brute_force_center(const std::vector<Vec2>& pts, const Vec2& start = Vec2::Zero(),
                               double span = 20.0) {
  auto cost = [&](const Vec2& c) {
    double mean = 0.0;
    for (const auto& p : pts) mean += (p - c).squaredNorm();
    mean /= static_cast<double>(pts.size());
    double s = 0.0;
    for (const auto& p : pts) {
      const double e = (p - c).squaredNorm() - mean;
      s += e * e;
    }
    return s;
  };
  Vec2 best = start;
  for (int level = 0; level < 300; ++level) {
    if (level == 150) span = 1.0;
    Vec2 level_best = best;
    double best_cost = cost(best);
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const Vec2 c = best + Vec2(i, j) * (span / 10.0);
        const double v = cost(c);
        if (v < best_cost) {
          best_cost = v;
          level_best = c;
        }
      }
    }
    best = level_best;
    span *= 0.6;
  }
  return best;
}

// Stacked least squares over x0..xK: prior residual weighted by P0^-1,
// dynamics residuals x_k - F x_{k-1} weighted by Q^-1 and measurement
// residuals z_k - H x_k weighted by R^-1. Returns the estimate of x_K.
inline Vec6 batch_wls_final(const Vec6& m0, const Mat6& p0, const std::vector<Vec2>& z,
                            const Mat6& f, const Mat6& q, const Mat2& r) {
  const int states = static_cast<int>(z.size()) + 1;
  const int cols = 6 * states;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(cols, cols);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(cols);
  auto add = [&](const Eigen::MatrixXd& jac, const Eigen::VectorXd& target, const Eigen::MatrixXd& w) {
    normal += jac.transpose() * w * jac;
    rhs += jac.transpose() * w * target;
  };
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6, cols);
  j.block(0, 0, 6, 6).setIdentity();
  add(j, m0, p0.inverse());
  const Eigen::MatrixXd q_inv = q.inverse();
  const Eigen::MatrixXd r_inv = r.inverse();
  for (int k = 1; k < states; ++k) {
    Eigen::MatrixXd jd = Eigen::MatrixXd::Zero(6, cols);
    jd.block(0, 6 * k, 6, 6).setIdentity();
    jd.block(0, 6 * (k - 1), 6, 6) = -f;
    add(jd, Eigen::VectorXd::Zero(6), q_inv);
    Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(2, cols);
    jm.block(0, 6 * k, 2, 2).setIdentity();
    add(jm, z[static_cast<std::size_t>(k - 1)], r_inv);
  }
  const Eigen::VectorXd x = normal.ldlt().solve(rhs);
  return x.tail<6>();
}

}  // namespace swa::oracle
