#include "sim/scenario_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "core/error.hpp"

namespace swa::sim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  fail(ErrorCode::kInvalidConfig, std::string(key) + ": expected " + std::string(want) +
                                      ", got '" + std::string(value) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    bad_value(key, value, "a number");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  value = trim(value);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    bad_value(key, value, "an integer");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "x1, y1; x2, y2; ..."
std::vector<Vec2> parse_positions(std::string_view key, std::string_view value) {
  std::vector<Vec2> out;
  value = trim(value);
  while (!value.empty()) {
    const auto semi = value.find(';');
    const std::string_view item = trim(value.substr(0, semi));
    value = semi == std::string_view::npos ? std::string_view{} : trim(value.substr(semi + 1));
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string_view::npos) bad_value(key, item, "'x, y'");
    out.emplace_back(parse_double(key, item.substr(0, comma)),
                     parse_double(key, item.substr(comma + 1)));
  }
  return out;
}

std::string format_positions(const std::vector<Vec2>& positions) {
  std::string out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i > 0) out += "; ";
    out += format_double(positions[i].x()) + ", " + format_double(positions[i].y());
  }
  return out;
}

struct Entry {
  std::string key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename Access>
Entry real(std::string key, Access access) {
  return {key,
          [key, access](ScenarioConfig& c, std::string_view v) { access(c) = parse_double(key, v); },
          [access](const ScenarioConfig& c) {
            return format_double(access(c));
          }};
}

// Diagonal 2x2 block of a covariance, exposed as one variance value.
template <typename Access>
Entry diag_block(std::string key, Access access, int block) {
  return {key,
          [key, access, block](ScenarioConfig& c, std::string_view v) {
            const double value = parse_double(key, v);
            auto& m = access(c);
            m(2 * block, 2 * block) = value;
            m(2 * block + 1, 2 * block + 1) = value;
          },
          [access, block](const ScenarioConfig& c) {
            return format_double(access(c)(2 * block, 2 * block));
          }};
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back({"sim.n_uavs",
                 [](ScenarioConfig& c, std::string_view v) { c.n_uavs = parse_int<int>("sim.n_uavs", v); },
                 [](const ScenarioConfig& c) { return std::to_string(c.n_uavs); }});
    e.push_back({"sim.initial_positions",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.initial_positions = parse_positions("sim.initial_positions", v);
                 },
                 [](const ScenarioConfig& c) { return format_positions(c.initial_positions); }});
    e.push_back(real("sim.ring_radius", [](auto& c) -> auto& { return c.ring_radius; }));
    e.push_back({"sim.seed",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.seed = parse_int<std::uint64_t>("sim.seed", v);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.seed); }});
    e.push_back(real("sim.duration", [](auto& c) -> auto& { return c.duration; }));
    e.push_back(real("sim.dt", [](auto& c) -> auto& { return c.dt; }));
    e.push_back(real("sim.f_p", [](auto& c) -> auto& { return c.f_p; }));
    e.push_back(real("sim.f_a", [](auto& c) -> auto& { return c.f_a; }));
    e.push_back(real("sim.log_rate", [](auto& c) -> auto& { return c.log_rate; }));
    e.push_back(real("sim.dropout_time", [](auto& c) -> auto& { return c.dropout_time; }));
    e.push_back(real("sim.dropout_stagger", [](auto& c) -> auto& { return c.dropout_stagger; }));
    e.push_back(real("sim.settle_time", [](auto& c) -> auto& { return c.settle_time; }));
    e.push_back(real("sim.detection_noise_sigma",
                     [](auto& c) -> auto& { return c.detection_noise_sigma; }));
    e.push_back(real("sim.imu_tilt_noise_sigma",
                     [](auto& c) -> auto& { return c.imu_tilt_noise_sigma; }));
    e.push_back(real("sim.imu_bias_sigma", [](auto& c) -> auto& { return c.imu_bias_sigma; }));
    e.push_back({"sim.random_headings",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.random_headings = parse_bool("sim.random_headings", v);
                 },
                 [](const ScenarioConfig& c) { return std::string(c.random_headings ? "true" : "false"); }});
    e.push_back(real("sim.plant_tau", [](auto& c) -> auto& { return c.plant_tau; }));
    e.push_back({"sim.mode",
                 [](ScenarioConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "swa") {
                     c.mode = Mode::kSwa;
                   } else if (v == "standalone-baseline") {
                     c.mode = Mode::kStandaloneBaseline;
                   } else {
                     bad_value("sim.mode", v, "swa or standalone-baseline");
                   }
                 },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.mode)); }});

    auto sq = [](auto& c) -> auto& { return c.surroundings.process_noise; };
    e.push_back(diag_block("surroundings.q_position", sq, 0));
    e.push_back(diag_block("surroundings.q_velocity", sq, 1));
    e.push_back(diag_block("surroundings.q_acceleration", sq, 2));
    e.push_back(diag_block("surroundings.r", [](auto& c) -> auto& {
      return c.surroundings.measurement_noise; }, 0));
    e.push_back(real("surroundings.stale_timeout",
                     [](auto& c) -> auto& { return c.surroundings.stale_timeout; }));
    e.push_back(diag_block("surroundings.initial_velocity_var", [](auto& c) -> auto& {
      return c.surroundings.initial_velocity_cov; }, 0));
    e.push_back(diag_block("surroundings.initial_acceleration_var", [](auto& c) -> auto& {
      return c.surroundings.initial_acceleration_cov; }, 0));
    e.push_back({"surroundings.gate",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.surroundings.gate_enabled = parse_bool("surroundings.gate", v);
                 },
                 [](const ScenarioConfig& c) {
                   return std::string(c.surroundings.gate_enabled ? "true" : "false");
                 }});

    e.push_back(real("frame.radius", [](auto& c) -> auto& { return c.frame.radius; }));
    e.push_back(real("frame.hold_timeout",
                     [](auto& c) -> auto& { return c.frame_hold_timeout; }));

    auto fq = [](auto& c) -> auto& { return c.focal.process_noise; };
    auto fi = [](auto& c) -> auto& { return c.focal.initial_cov; };
    e.push_back(real("focal.tau", [](auto& c) -> auto& { return c.focal.tau; }));
    e.push_back(diag_block("focal.q_position", fq, 0));
    e.push_back(diag_block("focal.q_velocity", fq, 1));
    e.push_back(diag_block("focal.q_acceleration", fq, 2));
    e.push_back(diag_block("focal.r_position", [](auto& c) -> auto& {
      return c.focal.position_noise; }, 0));
    e.push_back(diag_block("focal.r_acceleration", [](auto& c) -> auto& {
      return c.focal.acceleration_noise; }, 0));
    e.push_back(real("focal.q_c", [](auto& c) -> auto& { return c.focal.tilt_to_accel; }));
    e.push_back(diag_block("focal.initial_position_var", fi, 0));
    e.push_back(diag_block("focal.initial_velocity_var", fi, 1));
    e.push_back(diag_block("focal.initial_acceleration_var", fi, 2));

    e.push_back(real("control.k_p", [](auto& c) -> auto& { return c.control.k_p; }));
    e.push_back(real("control.k_v", [](auto& c) -> auto& { return c.control.k_v; }));
    e.push_back(real("control.v_max", [](auto& c) -> auto& { return c.control.v_max; }));
    e.push_back(real("control.neighbor_range",
                     [](auto& c) -> auto& { return c.control.neighbor_range; }));
    e.push_back({"control.neighbor_cap",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.control.neighbor_cap = parse_int<int>("control.neighbor_cap", v);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.control.neighbor_cap); }});
    return e;
  }();
  return entries;
}

const Entry* find_entry(std::string_view key) {
  for (const auto& e : registry()) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

// Number of whole steps in `period`, or -1 when dt does not divide it.
int steps_in(double period, double dt) {
  if (!(period > 0.0) || !(dt > 0.0) || !std::isfinite(period / dt)) return -1;
  const double ratio = period / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) return -1;
  return static_cast<int>(rounded);
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "\n";
    out += l;
  }
  return out;
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::kSwa ? "swa" : "standalone-baseline";
}

int ScenarioConfig::steps() const { return static_cast<int>(std::llround(duration / dt)); }
int ScenarioConfig::detection_period_steps() const { return steps_in(1.0 / f_p, dt); }
int ScenarioConfig::imu_period_steps() const { return steps_in(1.0 / f_a, dt); }
int ScenarioConfig::log_period_steps() const { return steps_in(1.0 / log_rate, dt); }

Seconds ScenarioConfig::dropout_time_of(int agent) const {
  return dropout_time + agent * dropout_stagger;
}

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const char* key, const char* what) {
    if (!ok) errors.push_back(std::string(key) + ": " + what);
  };
  auto positive = [&](double v, const char* key) { check(std::isfinite(v) && v > 0.0, key, "must be > 0"); };
  auto non_negative = [&](double v, const char* key) {
    check(std::isfinite(v) && v >= 0.0, key, "must be >= 0");
  };

  check(c.n_uavs >= 1, "sim.n_uavs", "must be >= 1");
  check(c.initial_positions.empty() || static_cast<int>(c.initial_positions.size()) == c.n_uavs,
        "sim.initial_positions", "count must equal sim.n_uavs");
  for (const auto& p : c.initial_positions) {
    check(is_finite(p), "sim.initial_positions", "must be finite");
  }
  positive(c.ring_radius, "sim.ring_radius");
  positive(c.dt, "sim.dt");
  non_negative(c.duration, "sim.duration");
  positive(c.f_p, "sim.f_p");
  positive(c.f_a, "sim.f_a");
  positive(c.log_rate, "sim.log_rate");
  if (c.dt > 0.0) {
    check(c.f_p <= 0.0 || c.detection_period_steps() > 0, "sim.f_p", "period must be a multiple of sim.dt");
    check(c.f_a <= 0.0 || c.imu_period_steps() > 0, "sim.f_a", "period must be a multiple of sim.dt");
    check(c.log_rate <= 0.0 || c.log_period_steps() > 0, "sim.log_rate",
          "period must be a multiple of sim.dt");
    if (std::isfinite(c.duration) && c.duration >= 0.0) {
      check(std::abs(c.duration / c.dt - std::round(c.duration / c.dt)) < 1e-6,
            "sim.duration", "must be a multiple of sim.dt");
    }
  }
  non_negative(c.dropout_time, "sim.dropout_time");
  non_negative(c.dropout_stagger, "sim.dropout_stagger");
  non_negative(c.settle_time, "sim.settle_time");
  non_negative(c.detection_noise_sigma, "sim.detection_noise_sigma");
  non_negative(c.imu_tilt_noise_sigma, "sim.imu_tilt_noise_sigma");
  non_negative(c.imu_bias_sigma, "sim.imu_bias_sigma");
  positive(c.plant_tau, "sim.plant_tau");

  const auto& s = c.surroundings;
  non_negative(s.process_noise(0, 0), "surroundings.q_position");
  non_negative(s.process_noise(2, 2), "surroundings.q_velocity");
  non_negative(s.process_noise(4, 4), "surroundings.q_acceleration");
  positive(s.measurement_noise(0, 0), "surroundings.r");
  positive(s.stale_timeout, "surroundings.stale_timeout");
  positive(s.initial_velocity_cov(0, 0), "surroundings.initial_velocity_var");
  positive(s.initial_acceleration_cov(0, 0), "surroundings.initial_acceleration_var");

  positive(c.frame.radius, "frame.radius");
  non_negative(c.frame_hold_timeout, "frame.hold_timeout");

  const auto& f = c.focal;
  positive(f.tau, "focal.tau");
  non_negative(f.process_noise(0, 0), "focal.q_position");
  non_negative(f.process_noise(2, 2), "focal.q_velocity");
  non_negative(f.process_noise(4, 4), "focal.q_acceleration");
  positive(f.position_noise(0, 0), "focal.r_position");
  positive(f.acceleration_noise(0, 0), "focal.r_acceleration");
  positive(f.tilt_to_accel, "focal.q_c");
  positive(f.initial_cov(0, 0), "focal.initial_position_var");
  positive(f.initial_cov(2, 2), "focal.initial_velocity_var");
  positive(f.initial_cov(4, 4), "focal.initial_acceleration_var");

  positive(c.control.k_p, "control.k_p");
  positive(c.control.k_v, "control.k_v");
  positive(c.control.v_max, "control.v_max");
  positive(c.control.neighbor_range, "control.neighbor_range");
  check(c.control.neighbor_cap >= 1, "control.neighbor_cap", "must be >= 1");
  return errors;
}

void require_valid(const ScenarioConfig& config) {
  const auto errors = validate(config);
  if (!errors.empty()) fail(ErrorCode::kInvalidConfig, join_lines(errors));
}

void set_value(ScenarioConfig& config, std::string_view key, std::string_view value) {
  const Entry* e = find_entry(trim(key));
  if (e == nullptr) fail(ErrorCode::kInvalidConfig, "unknown key '" + std::string(key) + "'");
  e->set(config, value);
}

std::string get_value(const ScenarioConfig& config, std::string_view key) {
  const Entry* e = find_entry(trim(key));
  if (e == nullptr) fail(ErrorCode::kInvalidConfig, "unknown key '" + std::string(key) + "'");
  return e->get(config);
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  std::vector<std::string> errors;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    try {
      set_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& err) {
      errors.push_back(err.what());
    }
  }
  if (errors.empty()) errors = validate(config);
  if (!errors.empty()) fail(ErrorCode::kInvalidConfig, join_lines(errors));
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string resolved_config(const ScenarioConfig& config) {
  std::string out;
  for (const auto& e : registry()) out += e.key + " = " + e.get(config) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& e : registry()) keys.push_back(e.key);
  return keys;
}

}  // namespace swa::sim
