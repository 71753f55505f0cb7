#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"
#include "focal_estimator/focal_estimator.hpp"
#include "surroundings/track_bank.hpp"

namespace swa::control {

struct ControlParams {
  double k_p = 0.5;             // 1/s
  double k_v = 0.63;            // -
  double v_max = 7.0;           // m/s
  double neighbor_range = 50.0; // m
  int neighbor_cap = 2;
};

// Tracks within range of the stable-frame origin, nearest first, capped.
// Equal ranges are ordered by ascending id.
std::vector<surroundings::NeighborTrack> select_neighborhood(
    std::span<const surroundings::NeighborTrack> tracks, const ControlParams& params);

// v_d = -k_p p - k_v v, saturated to |v_d| <= v_max.
Vec2 compute_velocity_command(const focal::FocalBelief& state, const ControlParams& params);

// Saturation that preserves direction.
Vec2 saturate(const Vec2& v, double v_max);

}  // namespace swa::control
