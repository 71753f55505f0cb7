#pragma once

#include <optional>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"
#include "focal_estimator/focal_estimator.hpp"
#include "sim/scenario_config.hpp"
#include "sim/sim_log.hpp"
#include "surroundings/track_bank.hpp"

namespace swa::sim {

/// World-frame lateral state of one simulated UAV.
struct UavTruth {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 acceleration = Vec2::Zero();  // over the last step
  Vec2 commanded_velocity = Vec2::Zero();
  Vec2 imu_bias = Vec2::Zero();
  double heading = 0.0;
};

// First-order velocity response: v <- e_d v + (1 - e_d) v_cmd, then p <- p + v dt.
UavTruth step_truth(const UavTruth& truth, const Vec2& v_cmd, Seconds dt, Seconds tau);

// Relative position of `target` in the observer body frame plus Gaussian noise.
Vec2 emit_relative_detection(const UavTruth& observer, const UavTruth& target, RngStream& rng,
                             double sigma);

// Tilt whose tilt_to_acceleration image is a_true + bias (+ q_c-scaled noise).
focal::ImuSample emit_imu_sample(const UavTruth& truth, RngStream& rng, double q_c,
                                 double tilt_sigma, Seconds stamp);

// Positions used when the config does not list them: evenly spaced on a ring.
std::vector<Vec2> initial_positions(const ScenarioConfig& config);

// Runs the scenario. Throws kInvalidConfig for invalid configs and kRuntime
// (with the step number) for failures during stepping.
SimLog run_scenario(const ScenarioConfig& config);

}  // namespace swa::sim
