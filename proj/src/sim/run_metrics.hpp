#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sim/sim_log.hpp"

namespace swa::sim {

/// Scalar summary of one run; one metrics.csv row.
struct RunMetrics {
  int n_uavs = 0;
  std::string mode;
  std::uint64_t seed = 0;
  double duration = 0.0;
  double initial_d_nb = 0.0;
  double final_d_nb = 0.0;
  double mean_d_nb = 0.0;
  double max_d_nb_ratio = 0.0;
  double min_pair_dist = 0.0;
  double max_pair_dist = 0.0;
  double mean_v_drift = 0.0;
  double max_v_drift = 0.0;
  double final_frame_norm = 0.0;
  double final_vel_std = 0.0;
};

// "After dropout" means t >= dropout_time; the steady-state window starts at
// dropout_time + settle_time; "final" windows cover the last 20 s.
RunMetrics compute_run_metrics(const SimLog& log);

void write_metrics_csv(std::ostream& out, const std::vector<RunMetrics>& runs);
void write_metrics_csv_file(const std::string& path, const std::vector<RunMetrics>& runs);

}  // namespace swa::sim
