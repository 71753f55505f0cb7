#pragma once

#include <cmath>

#include "core/types.hpp"

namespace swa {

/// Planar rotation, parameterized by its angle (radians, counter-clockwise).
class Rot2 {
 public:
  Rot2() = default;
  explicit Rot2(double angle)
      : angle_(angle), c_(std::cos(angle)), s_(std::sin(angle)) {}

  static Rot2 identity() { return Rot2(); }

  double angle() const { return angle_; }

  Mat2 matrix() const {
    Mat2 m;
    m << c_, -s_, s_, c_;
    return m;
  }

  Rot2 inverse() const { return Rot2(-angle_); }

  Vec2 operator*(const Vec2& v) const {
    return {c_ * v.x() - s_ * v.y(), s_ * v.x() + c_ * v.y()};
  }

  // Applies the transpose (= inverse) without building a new rotation.
  Vec2 transpose_times(const Vec2& v) const {
    return {c_ * v.x() + s_ * v.y(), -s_ * v.x() + c_ * v.y()};
  }

  Rot2 operator*(const Rot2& other) const { return Rot2(angle_ + other.angle_); }

 private:
  double angle_ = 0.0;
  double c_ = 1.0;
  double s_ = 0.0;
};

/// Element of SE(2): maps points expressed in the child frame into the parent.
struct Pose2 {
  Rot2 rotation;
  Vec2 translation = Vec2::Zero();

  static Pose2 identity() { return {}; }

  Vec2 apply(const Vec2& p) const { return rotation * p + translation; }

  Pose2 operator*(const Pose2& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  Pose2 inverse() const {
    const Rot2 inv = rotation.inverse();
    return {inv, -(inv * translation)};
  }
};

// Detections arrive in the body frame; the known heading defines R(B->S) and
// the stable-frame vector is R^T * v_body.
inline Vec2 rotate_body_to_stable(const Vec2& v_body, const Rot2& body_to_stable) {
  return body_to_stable.transpose_times(v_body);
}

// Inverse of rotate_body_to_stable.
inline Vec2 rotate_stable_to_body(const Vec2& v_stable, const Rot2& body_to_stable) {
  return body_to_stable * v_stable;
}

}  // namespace swa
