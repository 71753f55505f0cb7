#include "surroundings/track_bank.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace swa::surroundings {
namespace {

using Selector = Eigen::Matrix<double, 2, 6>;

Selector position_selector() {
  Selector h = Selector::Zero();
  h.leftCols<2>() = Mat2::Identity();
  return h;
}

}  // namespace

Mat6 constant_acceleration_transition(Seconds dt) {
  const Mat2 eye = Mat2::Identity();
  Mat6 f = Mat6::Identity();
  f.block<2, 2>(0, 2) = eye * dt;
  f.block<2, 2>(0, 4) = eye * (0.5 * dt * dt);
  f.block<2, 2>(2, 4) = eye * dt;
  return f;
}

NeighborTrack predict_track(const NeighborTrack& track, Seconds dt,
                            const SurroundingsParams& params) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    fail(ErrorCode::kInvalidArgument, "predict_track: dt must be positive and finite");
  }
  NeighborTrack out = track;
  out.belief = kalman_predict(track.belief, constant_acceleration_transition(dt), Vec6::Zero(),
                              params.process_noise);
  return out;
}

NeighborTrack correct_track(const NeighborTrack& track, const Vec2& z_stable,
                            const SurroundingsParams& params) {
  if (!is_finite(z_stable)) {
    fail(ErrorCode::kInvalidArgument, "correct_track: measurement is not finite");
  }
  NeighborTrack out = track;
  out.belief = kalman_correct<6, 2>(track.belief, position_selector(), z_stable,
                                    params.measurement_noise);
  return out;
}

const NeighborTrack* TrackBank::find(AgentId id) const {
  auto it = std::lower_bound(tracks_.begin(), tracks_.end(), id,
                             [](const NeighborTrack& t, AgentId v) { return t.id < v; });
  return (it != tracks_.end() && it->id == id) ? &*it : nullptr;
}

IngestOutcome TrackBank::ingest(AgentId id, const Vec2& z_body, double heading, Seconds t) {
  if (!is_finite(z_body) || !std::isfinite(heading) || !std::isfinite(t)) {
    fail(ErrorCode::kInvalidArgument, "ingest: non-finite detection");
  }
  const Vec2 z = rotate_body_to_stable(z_body, Rot2(heading));

  auto it = std::lower_bound(tracks_.begin(), tracks_.end(), id,
                             [](const NeighborTrack& tr, AgentId v) { return tr.id < v; });
  if (it == tracks_.end() || it->id != id) {
    NeighborTrack track;
    track.id = id;
    track.belief.mean = Vec6::Zero();
    track.belief.mean.head<2>() = z;
    track.belief.cov = Mat6::Zero();
    track.belief.cov.block<2, 2>(0, 0) = params_.measurement_noise;
    track.belief.cov.block<2, 2>(2, 2) = params_.initial_velocity_cov;
    track.belief.cov.block<2, 2>(4, 4) = params_.initial_acceleration_cov;
    track.last_seen = t;
    track.created_at = t;
    tracks_.insert(it, track);
    return IngestOutcome::kCreated;
  }

  if (t < it->last_seen) {
    ++dropped_out_of_order_;
    return IngestOutcome::kDroppedOutOfOrder;
  }
  NeighborTrack predicted = t > it->last_seen ? predict_track(*it, t - it->last_seen, params_) : *it;

  if (params_.gate_enabled) {
    const Mat2 s = predicted.belief.cov.block<2, 2>(0, 0) + params_.measurement_noise;
    const Vec2 innovation = z - predicted.position();
    if (innovation.dot(s.ldlt().solve(innovation)) > kGate99TwoDof) {
      ++gated_;
      return IngestOutcome::kGated;
    }
  }

  NeighborTrack corrected = correct_track(predicted, z, params_);
  corrected.last_seen = t;
  *it = std::move(corrected);
  return IngestOutcome::kUpdated;
}

std::size_t TrackBank::prune_stale(Seconds t) {
  const auto before = tracks_.size();
  std::erase_if(tracks_, [&](const NeighborTrack& tr) {
    return t - tr.last_seen > params_.stale_timeout;
  });
  return before - tracks_.size();
}

}  // namespace swa::surroundings
