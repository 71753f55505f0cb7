#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace swa::sim {

/// Time-indexed table of truths, estimates, commands and metrics. The column
/// set is fixed per run; see log_schema_json() for names and units.
struct SimLog {
  int n_uavs = 0;
  Seconds dropout_time = 0.0;
  Seconds settle_time = 0.0;
  Seconds log_period = 0.1;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Throws kInvalidArgument for unknown names.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  std::vector<double> series(std::string_view name) const;
  double at(std::size_t row, std::string_view name) const { return rows[row][column(name)]; }
};

// Per-UAV column names use the suffix _<index>, e.g. "x_0".
std::string uav_column(std::string_view base, int index);

std::vector<std::string> log_columns(int n_uavs);

// Header row plus one line per row, floats with 9 significant digits.
void write_csv(std::ostream& out, const SimLog& log);
void write_csv_file(const std::string& path, const SimLog& log);

// Reads a log written by write_csv. n_uavs is inferred from the columns;
// dropout/settle times are taken from the arguments.
SimLog read_csv_file(const std::string& path, Seconds dropout_time, Seconds settle_time);

// Machine-readable description of every log and metrics column.
std::string log_schema_json(int n_uavs);

std::string format_float(double v);

}  // namespace swa::sim
