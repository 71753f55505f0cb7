#include "sim/sim_log.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace swa::sim {
namespace {

struct ColumnDoc {
  const char* name;
  const char* unit;
  const char* description;
};

constexpr ColumnDoc kGlobalColumns[] = {
    {"t", "s", "simulation time"},
    {"d_nb", "m", "mean distance over nearest-neighbor pairs (true positions)"},
    {"centroid_x", "m", "swarm centroid, world frame"},
    {"centroid_y", "m", "swarm centroid, world frame"},
    {"v_drift_x", "m/s", "centroid velocity, central difference over log rows"},
    {"v_drift_y", "m/s", "centroid velocity, central difference over log rows"},
    {"v_drift", "m/s", "norm of the centroid velocity"},
    {"vel_std", "m/s", "largest per-axis standard deviation of true velocities across UAVs"},
    {"pair_dist_min", "m", "smallest pairwise distance since the previous row"},
    {"pair_dist_max", "m", "largest pairwise distance since the previous row"},
};

constexpr ColumnDoc kUavColumns[] = {
    {"x", "m", "true position, world frame"},
    {"y", "m", "true position, world frame"},
    {"vx", "m/s", "true velocity, world frame"},
    {"vy", "m/s", "true velocity, world frame"},
    {"cmd_vx", "m/s", "commanded velocity"},
    {"cmd_vy", "m/s", "commanded velocity"},
    {"est_px", "m", "estimated position in the floating frame (dead-reckoned offset in baseline mode)"},
    {"est_py", "m", "estimated position in the floating frame (dead-reckoned offset in baseline mode)"},
    {"est_vx", "m/s", "estimated velocity"},
    {"est_vy", "m/s", "estimated velocity"},
    {"frame_px", "m", "true position in the floating frame computed from true neighbor positions"},
    {"frame_py", "m", "true position in the floating frame computed from true neighbor positions"},
    {"n_nb", "-", "number of selected neighbors"},
    {"nees_pos", "-", "NEES of the position estimate against frame_px/frame_py"},
    {"dropped", "-", "1 once the UAV has lost absolute localization"},
};

constexpr ColumnDoc kMetricsColumns[] = {
    {"n_uavs", "-", "swarm size"},
    {"mode", "-", "swa or standalone-baseline"},
    {"seed", "-", "scenario seed"},
    {"duration", "s", "simulated time"},
    {"initial_d_nb", "m", "d_nb at t = 0"},
    {"final_d_nb", "m", "d_nb at the last row"},
    {"mean_d_nb", "m", "mean d_nb after dropout"},
    {"max_d_nb_ratio", "-", "largest d_nb after dropout divided by initial_d_nb"},
    {"min_pair_dist", "m", "smallest pairwise distance after dropout"},
    {"max_pair_dist", "m", "largest pairwise distance after dropout"},
    {"mean_v_drift", "m/s", "mean v_drift over the steady-state window"},
    {"max_v_drift", "m/s", "largest v_drift after dropout"},
    {"final_frame_norm", "m", "largest |frame_p| over the final 20 s, across UAVs"},
    {"final_vel_std", "m/s", "largest vel_std over the final 20 s"},
};

std::vector<double> parse_row(const std::string& line, std::size_t expected, std::size_t line_no) {
  std::vector<double> row;
  row.reserve(expected);
  std::size_t start = 0;
  while (start <= line.size()) {
    auto comma = line.find(',', start);
    if (comma == std::string::npos) comma = line.size();
    const std::string cell = line.substr(start, comma - start);
    double v = 0.0;
    if (cell == "nan" || cell == "-nan") {
      v = std::numeric_limits<double>::quiet_NaN();
    } else if (cell == "inf") {
      v = std::numeric_limits<double>::infinity();
    } else if (cell == "-inf") {
      v = -std::numeric_limits<double>::infinity();
    } else {
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail(ErrorCode::kIo, "log line " + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
    }
    row.push_back(v);
    start = comma + 1;
  }
  if (row.size() != expected) {
    fail(ErrorCode::kIo, "log line " + std::to_string(line_no) + ": wrong column count");
  }
  return row;
}

}  // namespace

std::size_t SimLog::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  fail(ErrorCode::kInvalidArgument, "log has no column '" + std::string(name) + "'");
}

bool SimLog::has_column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c == name) return true;
  }
  return false;
}

std::vector<double> SimLog::series(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

std::string uav_column(std::string_view base, int index) {
  return std::string(base) + "_" + std::to_string(index);
}

std::vector<std::string> log_columns(int n_uavs) {
  std::vector<std::string> cols;
  for (const auto& c : kGlobalColumns) cols.emplace_back(c.name);
  for (int i = 0; i < n_uavs; ++i) {
    for (const auto& c : kUavColumns) cols.push_back(uav_column(c.name, i));
  }
  return cols;
}

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& out, const SimLog& log) {
  for (std::size_t i = 0; i < log.columns.size(); ++i) {
    out << (i ? "," : "") << log.columns[i];
  }
  out << '\n';
  for (const auto& row : log.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_float(row[i]);
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const SimLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  write_csv(out, log);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

SimLog read_csv_file(const std::string& path, Seconds dropout_time, Seconds settle_time) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read '" + path + "'");
  SimLog log;
  log.dropout_time = dropout_time;
  log.settle_time = settle_time;
  std::string line;
  if (!std::getline(in, line) || line.empty()) fail(ErrorCode::kIo, "'" + path + "' is empty");
  std::stringstream header(line);
  for (std::string cell; std::getline(header, cell, ',');) log.columns.push_back(cell);
  while (log.has_column(uav_column("x", log.n_uavs))) ++log.n_uavs;
  if (!log.has_column("t") || log.n_uavs == 0) {
    fail(ErrorCode::kIo, "'" + path + "' is not a simulation log");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    log.rows.push_back(parse_row(line, log.columns.size(), line_no));
  }
  if (log.rows.size() >= 2) {
    log.log_period = log.rows[1][0] - log.rows[0][0];
  }
  return log;
}

std::string log_schema_json(int n_uavs) {
  using nlohmann::ordered_json;
  auto doc_list = [](const auto& docs) {
    ordered_json arr = ordered_json::array();
    for (const auto& d : docs) {
      arr.push_back({{"name", d.name}, {"unit", d.unit}, {"description", d.description}});
    }
    return arr;
  };
  ordered_json schema;
  schema["n_uavs"] = n_uavs;
  schema["float_format"] = "%.9g";
  schema["log_csv"] = {{"columns", doc_list(kGlobalColumns)},
                       {"per_uav_columns", doc_list(kUavColumns)},
                       {"per_uav_suffix", "_<index>"},
                       {"neighbor_pairs", "unordered pairs {i, j}, j among the control.neighbor_cap "
                                          "nearest UAVs of i"}};
  schema["metrics_csv"] = {{"columns", doc_list(kMetricsColumns)}};
  schema["anees_csv"] = {
      {"columns",
       ordered_json::array({{{"name", "t"}, {"unit", "s"}, {"description", "time since start"}},
                            {{"name", "anees_pos"}, {"unit", "-"}, {"description", "ANEES, position"}},
                            {{"name", "anees_vel"}, {"unit", "-"}, {"description", "ANEES, velocity"}},
                            {{"name", "r1"}, {"unit", "-"}, {"description", "lower acceptance bound"}},
                            {{"name", "r2"}, {"unit", "-"}, {"description", "upper acceptance bound"}}})}};
  schema["summary_csv"] = {
      {"columns",
       ordered_json::array({{{"name", "axis_value"}, {"unit", "-"}, {"description", "swept value"}},
                            {{"name", "runs"}, {"unit", "-"}, {"description", "seeds aggregated"}},
                            {{"name", "mean_d_nb"}, {"unit", "m"}, {"description", "mean of per-run mean_d_nb"}},
                            {{"name", "mean_v_drift"}, {"unit", "m/s"},
                             {"description", "mean of per-run mean_v_drift"}}})}};
  return schema.dump(2) + "\n";
}

}  // namespace swa::sim
