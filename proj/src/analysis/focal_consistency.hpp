#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "analysis/consistency.hpp"
#include "focal_estimator/focal_estimator.hpp"

namespace swa::analysis {

/// Monte-Carlo check of the focal estimator against truths drawn from its own
/// motion model: process noise Q_f every step, position fixes at f_p, IMU tilt
/// at f_a.
struct ConsistencyConfig {
  int runs = 12;
  Seconds duration = 60.0;
  Seconds dt = 0.01;
  double f_p = 10.0;
  double f_a = 100.0;
  Seconds warmup = 5.0;  // steps before this are excluded from the pass fraction
  std::uint64_t seed = 1;
  double alpha = 0.05;
  focal::FocalParams focal;
};

struct ConsistencyResult {
  std::vector<double> t;
  AneesReport position;
  AneesReport velocity;
  std::size_t steady_first = 0;  // first step index inside the steady-state window

  double position_pass() const { return position.pass_fraction_from(steady_first); }
  double velocity_pass() const { return velocity.pass_fraction_from(steady_first); }
};

ConsistencyResult run_focal_consistency(const ConsistencyConfig& config);

// Columns t, anees_pos, anees_vel, r1, r2.
void write_anees_csv(std::ostream& out, const ConsistencyResult& result);
void write_anees_csv_file(const std::string& path, const ConsistencyResult& result);

}  // namespace swa::analysis
