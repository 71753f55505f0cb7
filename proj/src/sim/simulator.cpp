#include "sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "analysis/metrics.hpp"
#include "control/formation_control.hpp"
#include "core/error.hpp"
#include "core/geometry.hpp"
#include "floating_frame/floating_frame.hpp"

namespace swa::sim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Detection {
  AgentId target = 0;
  Vec2 z_body = Vec2::Zero();
};

/// One UAV's onboard stack plus the dead-reckoning baseline.
struct Agent {
  AgentId id = 0;
  surroundings::TrackBank bank;
  focal::FocalEstimator estimator;
  std::vector<AgentId> neighbor_ids;
  Seconds last_frame_time = -std::numeric_limits<double>::infinity();
  long dropout_step = 0;

  Vec2 hold_point = Vec2::Zero();
  Vec2 dr_position = Vec2::Zero();
  Vec2 dr_velocity = Vec2::Zero();

  RngStream imu_rng;
  std::vector<RngStream> detection_rngs;  // indexed by target id

  Agent(AgentId agent_id, const ScenarioConfig& config)
      : id(agent_id),
        bank(config.surroundings),
        estimator(config.focal, 0.0),
        imu_rng(rng_stream(config.seed, agent_id, RngChannel::kImuNoise)) {
    for (int j = 0; j < config.n_uavs; ++j) {
      detection_rngs.push_back(rng_stream(config.seed, agent_id, RngChannel::kDetection,
                                          static_cast<std::uint64_t>(j)));
    }
  }
};

// Frame position of UAV i computed from the true positions of its selected
// neighbors; NaN when the geometry is degenerate or the neighborhood empty.
Vec2 true_frame_position(const std::vector<UavTruth>& truths, const Agent& agent,
                         const frame::FrameParams& params) {
  std::vector<Vec2> rel;
  for (AgentId j : agent.neighbor_ids) {
    rel.push_back(truths[j].position - truths[agent.id].position);
  }
  try {
    const auto est = frame::estimate_frame(rel, Vec2::Zero(), params);
    if (est) return -est->center;
  } catch (const Error&) {
  }
  return {kNaN, kNaN};
}

struct PairExtremes {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void update(const std::vector<UavTruth>& truths) {
    for (std::size_t i = 0; i < truths.size(); ++i) {
      for (std::size_t j = i + 1; j < truths.size(); ++j) {
        const double d = (truths[i].position - truths[j].position).norm();
        min = std::min(min, d);
        max = std::max(max, d);
      }
    }
  }
};

double velocity_spread(const std::vector<UavTruth>& truths) {
  const double n = static_cast<double>(truths.size());
  Vec2 mean = Vec2::Zero();
  for (const auto& t : truths) mean += t.velocity;
  mean /= n;
  Vec2 var = Vec2::Zero();
  for (const auto& t : truths) var += (t.velocity - mean).cwiseAbs2();
  var /= n;
  return std::sqrt(var.maxCoeff());
}

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config) : config_(config) {
    const auto positions = initial_positions(config);
    for (int i = 0; i < config.n_uavs; ++i) {
      UavTruth truth;
      truth.position = positions[static_cast<std::size_t>(i)];
      truth.imu_bias = rng_stream(config.seed, i, RngChannel::kImuBias).normal2(config.imu_bias_sigma);
      if (config.random_headings) {
        truth.heading = rng_stream(config.seed, i, RngChannel::kHeading)
                            .uniform(-std::numbers::pi, std::numbers::pi);
      }
      truths_.push_back(truth);

      Agent agent(static_cast<AgentId>(i), config);
      agent.hold_point = truth.position;
      agent.dropout_step = std::llround(config.dropout_time_of(i) / config.dt);
      agents_.push_back(std::move(agent));
    }
    log_.n_uavs = config.n_uavs;
    log_.dropout_time = config.dropout_time;
    log_.settle_time = config.settle_time;
    log_.log_period = 1.0 / config.log_rate;
    log_.columns = log_columns(config.n_uavs);
  }

  SimLog run() {
    const int steps = config_.steps();
    const int det_period = config_.detection_period_steps();
    const int imu_period = config_.imu_period_steps();
    const int log_period = config_.log_period_steps();

    extremes_.update(truths_);
    append_row(0.0, 0);
    for (int k = 1; k <= steps; ++k) {
      try {
        step(k, k % det_period == 0, k % imu_period == 0);
      } catch (const Error& err) {
        fail(ErrorCode::kRuntime, "step " + std::to_string(k) + ": " + err.what());
      }
      extremes_.update(truths_);
      if (k % log_period == 0) append_row(k * config_.dt, k);
    }
    fill_drift_columns();
    return std::move(log_);
  }

 private:
  void step(int k, bool detection_step, bool imu_step) {
    const Seconds t = k * config_.dt;
    const Seconds imu_dt = config_.imu_period_steps() * config_.dt;

    // Truth integration with the commands chosen at the previous step.
    for (auto& truth : truths_) {
      truth = step_truth(truth, truth.commanded_velocity, config_.dt, config_.plant_tau);
    }

    // Sensor emission.
    std::vector<std::vector<Detection>> detections(agents_.size());
    std::vector<focal::ImuSample> imu(agents_.size());
    for (auto& agent : agents_) {
      const auto& self = truths_[agent.id];
      if (detection_step) {
        for (std::size_t j = 0; j < truths_.size(); ++j) {
          if (j == agent.id) continue;
          detections[agent.id].push_back(
              {static_cast<AgentId>(j),
               emit_relative_detection(self, truths_[j], agent.detection_rngs[j],
                                       config_.detection_noise_sigma)});
        }
      }
      if (imu_step) {
        imu[agent.id] = emit_imu_sample(self, agent.imu_rng, config_.focal.tilt_to_accel,
                                        config_.imu_tilt_noise_sigma, t);
      }
    }

    // Per-agent estimation, then control.
    for (auto& agent : agents_) {
      const auto& self = truths_[agent.id];
      const bool dropped = k >= agent.dropout_step;

      if (detection_step) {
        for (const auto& d : detections[agent.id]) {
          agent.bank.ingest(d.target, d.z_body, self.heading, t);
        }
        agent.bank.prune_stale(t);
        const auto neighbors = control::select_neighborhood(agent.bank.tracks(), config_.control);
        agent.neighbor_ids.clear();
        std::vector<Vec2> positions;
        for (const auto& n : neighbors) {
          agent.neighbor_ids.push_back(n.id);
          positions.push_back(n.position());
        }
        std::optional<frame::FrameEstimate> frame;
        try {
          frame = frame::estimate_frame(positions, Vec2::Zero(), config_.frame);
        } catch (const Error& err) {
          if (err.code() != ErrorCode::kDegenerateGeometry && err.code() != ErrorCode::kNoCircle) {
            throw;
          }
        }
        if (frame && config_.mode == Mode::kSwa) {
          agent.estimator.correct_position(*frame, t);
          agent.last_frame_time = t;
        }
      }

      if (config_.mode == Mode::kSwa) {
        if (imu_step) agent.estimator.correct_acceleration(imu[agent.id]);
        agent.estimator.advance_to(t);
      } else if (!dropped) {
        // Absolute localization still available.
        agent.dr_position = self.position - agent.hold_point;
        agent.dr_velocity = self.velocity;
      } else if (imu_step) {
        const Vec2 accel = focal::tilt_to_acceleration(imu[agent.id], config_.focal.tilt_to_accel);
        agent.dr_velocity += accel * imu_dt;
        agent.dr_position += agent.dr_velocity * imu_dt;
      }

      Vec2 command = Vec2::Zero();
      if (!dropped) {
        command = -config_.control.k_p * (self.position - agent.hold_point) -
                  config_.control.k_v * self.velocity;
      } else if (config_.mode == Mode::kStandaloneBaseline) {
        command = -config_.control.k_p * agent.dr_position - config_.control.k_v * agent.dr_velocity;
      } else if (t - agent.last_frame_time <= config_.frame_hold_timeout + 1e-9) {
        command = control::compute_velocity_command(agent.estimator.state(), config_.control);
      }
      command = control::saturate(command, config_.control.v_max);
      agent.estimator.set_command(command);
      truths_[agent.id].commanded_velocity = command;
    }
  }

  void append_row(Seconds t, int k) {
    std::vector<double> row(log_.columns.size(), kNaN);
    std::vector<Vec2> positions;
    for (const auto& truth : truths_) positions.push_back(truth.position);

    std::size_t c = 0;
    row[c++] = t;
    const auto pairs = analysis::nearest_neighbor_pairs(positions, config_.control.neighbor_cap);
    row[c++] = pairs.empty() ? kNaN : analysis::metric_neighbor_distance(positions, pairs);
    const Vec2 center = analysis::centroid(positions);
    row[c++] = center.x();
    row[c++] = center.y();
    c += 3;  // drift columns, filled after the run
    row[c++] = velocity_spread(truths_);
    row[c++] = truths_.size() > 1 ? extremes_.min : kNaN;
    row[c++] = truths_.size() > 1 ? extremes_.max : kNaN;
    extremes_ = {};

    for (const auto& agent : agents_) {
      const auto& truth = truths_[agent.id];
      const bool baseline = config_.mode == Mode::kStandaloneBaseline;
      const auto& est = agent.estimator.state();
      const Vec2 est_p = baseline ? agent.dr_position : est.position();
      const Vec2 est_v = baseline ? agent.dr_velocity : est.velocity();
      const Vec2 frame_p = true_frame_position(truths_, agent, config_.frame);

      row[c++] = truth.position.x();
      row[c++] = truth.position.y();
      row[c++] = truth.velocity.x();
      row[c++] = truth.velocity.y();
      row[c++] = truth.commanded_velocity.x();
      row[c++] = truth.commanded_velocity.y();
      row[c++] = est_p.x();
      row[c++] = est_p.y();
      row[c++] = est_v.x();
      row[c++] = est_v.y();
      row[c++] = frame_p.x();
      row[c++] = frame_p.y();
      row[c++] = static_cast<double>(agent.neighbor_ids.size());
      double nees_pos = kNaN;
      if (!baseline && is_finite(frame_p)) {
        const Vec2 e = est_p - frame_p;
        const Mat2 p = est.belief.cov.block<2, 2>(0, 0);
        nees_pos = e.dot(p.ldlt().solve(e));
      }
      row[c++] = nees_pos;
      row[c++] = k >= agent.dropout_step ? 1.0 : 0.0;
    }
    log_.rows.push_back(std::move(row));
  }

  void fill_drift_columns() {
    const std::size_t cx = log_.column("v_drift_x");
    if (log_.rows.size() < 2) {
      for (auto& row : log_.rows) row[cx] = row[cx + 1] = row[cx + 2] = 0.0;
      return;
    }
    std::vector<Vec2> centroids;
    for (const auto& row : log_.rows) centroids.emplace_back(row[cx - 2], row[cx - 1]);
    const auto drift = analysis::metric_drift_velocity(centroids, log_.log_period);
    for (std::size_t r = 0; r < log_.rows.size(); ++r) {
      log_.rows[r][cx] = drift[r].x();
      log_.rows[r][cx + 1] = drift[r].y();
      log_.rows[r][cx + 2] = drift[r].norm();
    }
  }

  const ScenarioConfig& config_;
  std::vector<UavTruth> truths_;
  std::vector<Agent> agents_;
  PairExtremes extremes_;
  SimLog log_;
};

}  // namespace

UavTruth step_truth(const UavTruth& truth, const Vec2& v_cmd, Seconds dt, Seconds tau) {
  const double e_d = std::exp(-dt / tau);
  UavTruth out = truth;
  out.commanded_velocity = v_cmd;
  out.velocity = e_d * truth.velocity + (1.0 - e_d) * v_cmd;
  out.acceleration = (out.velocity - truth.velocity) / dt;
  out.position = truth.position + out.velocity * dt;
  return out;
}

Vec2 emit_relative_detection(const UavTruth& observer, const UavTruth& target, RngStream& rng,
                             double sigma) {
  const Vec2 rel = target.position - observer.position;
  return rotate_stable_to_body(rel, Rot2(observer.heading)) + rng.normal2(sigma);
}

focal::ImuSample emit_imu_sample(const UavTruth& truth, RngStream& rng, double q_c,
                                 double tilt_sigma, Seconds stamp) {
  const Vec2 tilt = Rot2(truth.heading).transpose_times(truth.acceleration + truth.imu_bias) / q_c +
                    rng.normal2(tilt_sigma);
  return {tilt.x(), tilt.y(), truth.heading, stamp};
}

std::vector<Vec2> initial_positions(const ScenarioConfig& config) {
  if (!config.initial_positions.empty()) return config.initial_positions;
  std::vector<Vec2> out;
  for (int i = 0; i < config.n_uavs; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / config.n_uavs;
    out.emplace_back(config.ring_radius * std::cos(angle), config.ring_radius * std::sin(angle));
  }
  return out;
}

SimLog run_scenario(const ScenarioConfig& config) {
  require_valid(config);
  return Simulation(config).run();
}

}  // namespace swa::sim
