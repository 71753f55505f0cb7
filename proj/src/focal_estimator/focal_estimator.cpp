#include "focal_estimator/focal_estimator.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/geometry.hpp"

namespace swa::focal {
namespace {

void check_dt(Seconds dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    fail(ErrorCode::kInvalidArgument, "focal prediction: dt must be positive and finite");
  }
}

}  // namespace

FocalBelief initial_focal_belief(const FocalParams& params, Seconds stamp) {
  FocalBelief out;
  out.belief.mean = Vec6::Zero();
  out.belief.cov = params.initial_cov;
  out.stamp = stamp;
  return out;
}

double damping_factor(Seconds dt, Seconds tau) { return std::exp(-dt / tau); }

Mat6 focal_transition(Seconds dt, Seconds tau) {
  const Mat2 eye = Mat2::Identity();
  Mat6 f = Mat6::Identity();
  f.block<2, 2>(0, 2) = eye * dt;
  f.block<2, 2>(0, 4) = eye * (0.5 * dt * dt);
  f.block<2, 2>(2, 2) = eye * damping_factor(dt, tau);
  f.block<2, 2>(2, 4) = eye * dt;
  return f;
}

Eigen::Matrix<double, 6, 2> focal_input_matrix(Seconds dt, Seconds tau) {
  Eigen::Matrix<double, 6, 2> b = Eigen::Matrix<double, 6, 2>::Zero();
  b.block<2, 2>(2, 0) = Mat2::Identity() * (1.0 - damping_factor(dt, tau));
  return b;
}

Eigen::Matrix<double, 2, 6> focal_measurement_matrix(bool h_position, bool h_acceleration) {
  if (h_position == h_acceleration) {
    fail(ErrorCode::kInvalidArgument,
         "focal correction must select exactly one of position or acceleration");
  }
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h.block<2, 2>(0, h_position ? 0 : 4) = Mat2::Identity();
  return h;
}

FocalBelief predict_focal(const FocalBelief& state, const Vec2& v_desired, Seconds dt,
                          const FocalParams& params) {
  check_dt(dt);
  if (!is_finite(v_desired) || !state.belief.mean.allFinite()) {
    fail(ErrorCode::kInvalidArgument, "focal prediction: non-finite input");
  }
  FocalBelief out;
  out.belief = kalman_predict(state.belief, focal_transition(dt, params.tau),
                              focal_input_matrix(dt, params.tau) * v_desired,
                              params.process_noise);
  out.stamp = state.stamp + dt;
  return out;
}

Vec2 tilt_to_acceleration(const ImuSample& imu, double q_c) {
  return q_c * (Rot2(imu.heading) * Vec2(imu.pitch, imu.roll));
}

FocalBelief correct_focal_position(const FocalBelief& state, const frame::FrameEstimate& frame,
                                   const FocalParams& params) {
  if (!is_finite(frame.center)) {
    fail(ErrorCode::kInvalidArgument, "focal position correction: non-finite frame center");
  }
  FocalBelief out = state;
  out.belief = kalman_correct<6, 2>(state.belief, focal_measurement_matrix(true, false),
                                    -frame.center, params.position_noise);
  return out;
}

FocalBelief correct_focal_acceleration(const FocalBelief& state, const ImuSample& imu,
                                       const FocalParams& params) {
  const Vec2 z = tilt_to_acceleration(imu, params.tilt_to_accel);
  if (!is_finite(z)) {
    fail(ErrorCode::kInvalidArgument, "focal acceleration correction: non-finite IMU sample");
  }
  FocalBelief out = state;
  out.belief = kalman_correct<6, 2>(state.belief, focal_measurement_matrix(false, true), z,
                                    params.acceleration_noise);
  return out;
}

void FocalEstimator::advance_to(Seconds t) {
  if (t < state_.stamp) {
    fail(ErrorCode::kInvalidArgument, "focal estimator: event earlier than current state");
  }
  if (t == state_.stamp) return;
  const Seconds dt = t - state_.stamp;
  state_ = predict_focal(state_, command_, dt, params_);
  state_.stamp = t;
}

void FocalEstimator::correct_position(const frame::FrameEstimate& frame, Seconds t) {
  advance_to(t);
  state_ = correct_focal_position(state_, frame, params_);
}

void FocalEstimator::correct_acceleration(const ImuSample& imu) {
  advance_to(imu.stamp);
  state_ = correct_focal_acceleration(state_, imu, params_);
}

}  // namespace swa::focal
