#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "control/formation_control.hpp"
#include "core/types.hpp"
#include "floating_frame/floating_frame.hpp"
#include "focal_estimator/focal_estimator.hpp"
#include "surroundings/track_bank.hpp"

namespace swa::sim {

enum class Mode { kSwa, kStandaloneBaseline };

std::string_view to_string(Mode mode);

/// Full simulation description. Every field is reachable through a dotted
/// config key (see config_keys()).
struct ScenarioConfig {
  int n_uavs = 3;
  std::vector<Vec2> initial_positions;  // empty: ring placement
  double ring_radius = 10.0;            // m
  std::uint64_t seed = 1;
  Seconds duration = 120.0;
  Seconds dt = 0.01;
  double f_p = 10.0;   // Hz, relative detections
  double f_a = 100.0;  // Hz, IMU
  double log_rate = 10.0;  // Hz
  Seconds dropout_time = 10.0;
  Seconds dropout_stagger = 0.0;  // agent i drops at dropout_time + i * stagger
  Seconds settle_time = 30.0;     // steady-state window starts at dropout + settle
  double detection_noise_sigma = 0.1;  // m
  double imu_tilt_noise_sigma = 0.005;  // rad
  double imu_bias_sigma = 0.05;        // m/s^2
  bool random_headings = true;
  Seconds plant_tau = 2.8;
  Mode mode = Mode::kSwa;

  surroundings::SurroundingsParams surroundings;
  frame::FrameParams frame;
  Seconds frame_hold_timeout = 0.5;
  focal::FocalParams focal;
  control::ControlParams control;

  int steps() const;
  int detection_period_steps() const;
  int imu_period_steps() const;
  int log_period_steps() const;
  Seconds dropout_time_of(int agent) const;
};

// Validation problems, each naming the offending key. Empty when valid.
std::vector<std::string> validate(const ScenarioConfig& config);

// Throws kInvalidConfig listing every problem.
void require_valid(const ScenarioConfig& config);

// Applies one `key = value` assignment. Throws kInvalidConfig for unknown keys
// or malformed values.
void set_value(ScenarioConfig& config, std::string_view key, std::string_view value);

std::string get_value(const ScenarioConfig& config, std::string_view key);

// Parses `key = value` lines ('#' starts a comment) on top of defaults.
// Throws kInvalidConfig listing all problems, including validation.
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig load_config(const std::string& path);

// Every key with its value, at full precision; parse_config(resolved) yields an
// identical configuration.
std::string resolved_config(const ScenarioConfig& config);

std::vector<std::string> config_keys();

}  // namespace swa::sim
