#pragma once

#include <Eigen/Dense>

#include "core/error.hpp"
#include "core/linalg.hpp"

namespace swa {

/// Gaussian belief: mean vector and covariance of a filtered state.
template <int Dim>
struct Belief {
  using Vector = Eigen::Matrix<double, Dim, 1>;
  using Matrix = Eigen::Matrix<double, Dim, Dim>;

  Vector mean = Vector::Zero();
  Matrix cov = Matrix::Identity();
};

using Belief6 = Belief<6>;

// x <- F x + u, P <- F P F^T + Q.
template <int Dim>
Belief<Dim> kalman_predict(const Belief<Dim>& prior,
                           const typename Belief<Dim>::Matrix& transition,
                           const typename Belief<Dim>::Vector& input_effect,
                           const typename Belief<Dim>::Matrix& process_noise) {
  Belief<Dim> out;
  out.mean = transition * prior.mean + input_effect;
  out.cov = transition * prior.cov * transition.transpose() + process_noise;
  linalg::symmetrize(out.cov);
  return out;
}

// Standard LKF correction with the covariance update P - K H P.
template <int Dim, int MeasDim>
Belief<Dim> kalman_correct(const Belief<Dim>& prior,
                           const Eigen::Matrix<double, MeasDim, Dim>& h,
                           const Eigen::Matrix<double, MeasDim, 1>& z,
                           const Eigen::Matrix<double, MeasDim, MeasDim>& r) {
  using MeasMatrix = Eigen::Matrix<double, MeasDim, MeasDim>;
  const MeasMatrix innovation_cov = h * prior.cov * h.transpose() + r;
  Eigen::LLT<MeasMatrix> llt(innovation_cov);
  if (llt.info() != Eigen::Success || !innovation_cov.allFinite()) {
    fail(ErrorCode::kSingularMatrix, "innovation covariance is not positive definite");
  }
  const Eigen::Matrix<double, Dim, MeasDim> gain =
      llt.solve(h * prior.cov).transpose();  // P H^T S^-1, S symmetric

  Belief<Dim> out;
  out.mean = prior.mean + gain * (z - h * prior.mean);
  out.cov = prior.cov - gain * h * prior.cov;
  linalg::symmetrize(out.cov);
  return out;
}

}  // namespace swa
