#include "sim/run_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "core/error.hpp"

namespace swa::sim {
namespace {

constexpr double kFinalWindow = 20.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Accumulator {
  double sum = 0.0;
  std::size_t count = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (std::isnan(v)) return;
    sum += v;
    ++count;
    min = std::min(min, v);
    max = std::max(max, v);
  }
  double mean() const { return count ? sum / static_cast<double>(count) : kNaN; }
  double lowest() const { return count ? min : kNaN; }
  double highest() const { return count ? max : kNaN; }
};

}  // namespace

RunMetrics compute_run_metrics(const SimLog& log) {
  if (log.rows.empty()) fail(ErrorCode::kInvalidArgument, "log has no rows");
  RunMetrics m;
  m.n_uavs = log.n_uavs;
  const std::size_t t_col = log.column("t");
  const std::size_t d_col = log.column("d_nb");
  const std::size_t vd_col = log.column("v_drift");
  const std::size_t min_col = log.column("pair_dist_min");
  const std::size_t max_col = log.column("pair_dist_max");
  const std::size_t std_col = log.column("vel_std");
  std::vector<std::size_t> frame_cols;
  for (int i = 0; i < log.n_uavs; ++i) {
    frame_cols.push_back(log.column(uav_column("frame_px", i)));
  }

  const double t_end = log.rows.back()[t_col];
  m.duration = t_end - log.rows.front()[t_col];
  m.initial_d_nb = log.rows.front()[d_col];
  m.final_d_nb = log.rows.back()[d_col];

  Accumulator d_nb, pair_min, pair_max, v_ss, v_all, frame, vel_std;
  const double eps = 1e-9;
  for (const auto& row : log.rows) {
    const double t = row[t_col];
    if (t + eps < log.dropout_time) continue;
    d_nb.add(row[d_col]);
    pair_min.add(row[min_col]);
    pair_max.add(row[max_col]);
    v_all.add(row[vd_col]);
    if (t + eps >= log.dropout_time + log.settle_time) v_ss.add(row[vd_col]);
    if (t + eps >= t_end - kFinalWindow) {
      vel_std.add(row[std_col]);
      for (std::size_t c : frame_cols) frame.add(std::hypot(row[c], row[c + 1]));
    }
  }
  m.mean_d_nb = d_nb.mean();
  m.max_d_nb_ratio = d_nb.highest() / m.initial_d_nb;
  m.min_pair_dist = pair_min.lowest();
  m.max_pair_dist = pair_max.highest();
  m.mean_v_drift = v_ss.mean();
  m.max_v_drift = v_all.highest();
  m.final_frame_norm = frame.highest();
  m.final_vel_std = vel_std.highest();
  return m;
}

void write_metrics_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  out << "n_uavs,mode,seed,duration,initial_d_nb,final_d_nb,mean_d_nb,max_d_nb_ratio,"
         "min_pair_dist,max_pair_dist,mean_v_drift,max_v_drift,final_frame_norm,final_vel_std\n";
  for (const auto& m : runs) {
    out << m.n_uavs << ',' << m.mode << ',' << m.seed;
    for (double v : {m.duration, m.initial_d_nb, m.final_d_nb, m.mean_d_nb, m.max_d_nb_ratio,
                     m.min_pair_dist, m.max_pair_dist, m.mean_v_drift, m.max_v_drift,
                     m.final_frame_norm, m.final_vel_std}) {
      out << ',' << format_float(v);
    }
    out << '\n';
  }
}

void write_metrics_csv_file(const std::string& path, const std::vector<RunMetrics>& runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  write_metrics_csv(out, runs);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace swa::sim
