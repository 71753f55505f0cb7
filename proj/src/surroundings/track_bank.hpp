#pragma once

#include <cstddef>
#include <vector>

#include "core/belief.hpp"
#include "core/geometry.hpp"
#include "core/types.hpp"

namespace swa::surroundings {

struct SurroundingsParams {
  // Process noise, diagonal per block (position, velocity, acceleration).
  Mat6 process_noise = (Vec6() << 1e-3, 1e-3, 1e-2, 1e-2, 1e-1, 1e-1).finished().asDiagonal();
  Mat2 measurement_noise = 0.1 * Mat2::Identity();
  Seconds stale_timeout = 2.0;
  // Initial velocity / acceleration variances of a newly created track.
  Mat2 initial_velocity_cov = Mat2::Identity();
  Mat2 initial_acceleration_cov = Mat2::Identity();
  // Optional Mahalanobis gate at the 99% ellipse of a 2-dof chi-square.
  bool gate_enabled = false;
};

// 99% quantile of chi-square with 2 dof: -2 ln(0.01).
inline constexpr double kGate99TwoDof = 9.210340371976184;

/// One tracked observable UAV; the belief is in the focal stable frame and
/// refers to time `last_seen`.
struct NeighborTrack {
  AgentId id = 0;
  Belief6 belief;
  Seconds last_seen = 0.0;
  Seconds created_at = 0.0;

  Vec2 position() const { return belief.mean.head<2>(); }
  Vec2 velocity() const { return belief.mean.segment<2>(2); }
};

// Constant-acceleration transition over dt.
Mat6 constant_acceleration_transition(Seconds dt);

NeighborTrack predict_track(const NeighborTrack& track, Seconds dt,
                            const SurroundingsParams& params);

NeighborTrack correct_track(const NeighborTrack& track, const Vec2& z_stable,
                            const SurroundingsParams& params);

enum class IngestOutcome { kCreated, kUpdated, kDroppedOutOfOrder, kGated };

/// Bank of independent LKFs, one per detected UAV, kept sorted by id.
class TrackBank {
 public:
  explicit TrackBank(SurroundingsParams params = {}) : params_(std::move(params)) {}

  // Rotates a body-frame detection into the stable frame using the known
  // heading, then creates or updates the track for `id`. Throws
  // kInvalidArgument for non-finite input, leaving the bank unchanged.
  IngestOutcome ingest(AgentId id, const Vec2& z_body, double heading, Seconds t);

  // Removes tracks with t - last_seen > stale_timeout. Returns the count removed.
  std::size_t prune_stale(Seconds t);

  const std::vector<NeighborTrack>& tracks() const { return tracks_; }
  std::size_t size() const { return tracks_.size(); }
  bool empty() const { return tracks_.empty(); }
  const NeighborTrack* find(AgentId id) const;

  // Diagnostics.
  std::size_t dropped_out_of_order() const { return dropped_out_of_order_; }
  std::size_t gated() const { return gated_; }

  const SurroundingsParams& params() const { return params_; }

 private:
  SurroundingsParams params_;
  std::vector<NeighborTrack> tracks_;
  std::size_t dropped_out_of_order_ = 0;
  std::size_t gated_ = 0;
};

}  // namespace swa::surroundings
