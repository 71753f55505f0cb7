#pragma once

#include "core/belief.hpp"
#include "core/types.hpp"
#include "floating_frame/floating_frame.hpp"

namespace swa::focal {

struct FocalParams {
  Seconds tau = 2.8;  // velocity time constant
  Mat6 process_noise = (Vec6() << 5e-2, 5e-2, 5e-1, 5e-1, 5.0, 5.0).finished().asDiagonal();
  Mat2 position_noise = 2e-2 * Mat2::Identity();      // R_c
  Mat2 acceleration_noise = 2.25 * Mat2::Identity();  // R_a
  double tilt_to_accel = 6.35;                        // q_c, (m/s^2)/rad
  Mat6 initial_cov = Mat6::Identity();
};

/// Focal UAV state [r, r_dot, r_ddot] of the stable frame in the floating frame.
struct FocalBelief {
  Belief6 belief;
  Seconds stamp = 0.0;

  Vec2 position() const { return belief.mean.head<2>(); }
  Vec2 velocity() const { return belief.mean.segment<2>(2); }
  Vec2 acceleration() const { return belief.mean.tail<2>(); }
};

struct ImuSample {
  double pitch = 0.0;    // rad
  double roll = 0.0;     // rad
  double heading = 0.0;  // rad
  Seconds stamp = 0.0;
};

FocalBelief initial_focal_belief(const FocalParams& params, Seconds stamp = 0.0);

double damping_factor(Seconds dt, Seconds tau);

// F_f: constant-acceleration transition with e_d on the velocity diagonal.
Mat6 focal_transition(Seconds dt, Seconds tau);
// B_f = [0; (1 - e_d) I; 0].
Eigen::Matrix<double, 6, 2> focal_input_matrix(Seconds dt, Seconds tau);

// H_f = [h_p I, 0, h_a I]. Exactly one of the selectors must be set.
Eigen::Matrix<double, 2, 6> focal_measurement_matrix(bool h_position, bool h_acceleration);

FocalBelief predict_focal(const FocalBelief& state, const Vec2& v_desired, Seconds dt,
                          const FocalParams& params);

Vec2 tilt_to_acceleration(const ImuSample& imu, double q_c);

// Position measurement z = -center with noise R_c.
FocalBelief correct_focal_position(const FocalBelief& state, const frame::FrameEstimate& frame,
                                   const FocalParams& params);

// Acceleration measurement from the IMU tilt with noise R_a.
FocalBelief correct_focal_acceleration(const FocalBelief& state, const ImuSample& imu,
                                       const FocalParams& params);

/// Event-driven wrapper: predicts to each measurement stamp with the last
/// commanded velocity, then corrects.
class FocalEstimator {
 public:
  explicit FocalEstimator(FocalParams params = {}, Seconds start = 0.0)
      : params_(std::move(params)), state_(initial_focal_belief(params_, start)) {}

  void reset(const FocalBelief& state) { state_ = state; }

  // Sets the input used for subsequent predictions.
  void set_command(const Vec2& v_desired) { command_ = v_desired; }
  const Vec2& command() const { return command_; }

  // Predicts forward to t; no-op when t equals the current stamp. Throws
  // kInvalidArgument when t is earlier than the current stamp.
  void advance_to(Seconds t);

  void correct_position(const frame::FrameEstimate& frame, Seconds t);
  void correct_acceleration(const ImuSample& imu);

  const FocalBelief& state() const { return state_; }
  const FocalParams& params() const { return params_; }

 private:
  FocalParams params_;
  FocalBelief state_;
  Vec2 command_ = Vec2::Zero();
};

}  // namespace swa::focal
