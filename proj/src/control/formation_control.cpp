#include "control/formation_control.hpp"

#include <algorithm>

namespace swa::control {

std::vector<surroundings::NeighborTrack> select_neighborhood(
    std::span<const surroundings::NeighborTrack> tracks, const ControlParams& params) {
  std::vector<surroundings::NeighborTrack> out;
  for (const auto& t : tracks) {
    if (t.position().norm() <= params.neighbor_range) out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const double ra = a.position().squaredNorm();
    const double rb = b.position().squaredNorm();
    return ra != rb ? ra < rb : a.id < b.id;
  });
  if (params.neighbor_cap >= 0 && out.size() > static_cast<std::size_t>(params.neighbor_cap)) {
    out.resize(static_cast<std::size_t>(params.neighbor_cap));
  }
  return out;
}

Vec2 saturate(const Vec2& v, double v_max) {
  const double norm = v.norm();
  return norm > v_max ? Vec2(v * (v_max / norm)) : v;
}

Vec2 compute_velocity_command(const focal::FocalBelief& state, const ControlParams& params) {
  const Vec2 command = -params.k_p * state.position() - params.k_v * state.velocity();
  return saturate(command, params.v_max);
}

}  // namespace swa::control
