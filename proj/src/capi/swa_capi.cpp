#include "swa/swa.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "analysis/consistency.hpp"
#include "analysis/focal_consistency.hpp"
#include "analysis/observability.hpp"
#include "control/formation_control.hpp"
#include "core/error.hpp"
#include "floating_frame/floating_frame.hpp"
#include "focal_estimator/focal_estimator.hpp"
#include "sim/run_metrics.hpp"
#include "sim/scenario_config.hpp"
#include "sim/simulator.hpp"
#include "surroundings/track_bank.hpp"

struct swa_config {
  swa::sim::ScenarioConfig rep;
};

struct swa_log {
  swa::sim::SimLog rep;
  swa::sim::Mode mode = swa::sim::Mode::kSwa;
  std::uint64_t seed = 0;
};

struct swa_consistency {
  swa::analysis::ConsistencyResult rep;
};

struct swa_track_bank {
  swa::surroundings::TrackBank rep;
};

struct swa_focal {
  swa::focal::FocalEstimator rep;
};

namespace {

std::string& last_error() {
  thread_local std::string message;
  return message;
}

swa_status set_error(swa_status status, const std::string& message) {
  last_error() = message;
  return status;
}

swa_status to_status(swa::ErrorCode code) {
  switch (code) {
    case swa::ErrorCode::kInvalidArgument: return SWA_ERR_INVALID_ARGUMENT;
    case swa::ErrorCode::kInvalidConfig: return SWA_ERR_INVALID_CONFIG;
    case swa::ErrorCode::kDegenerateGeometry: return SWA_ERR_DEGENERATE_GEOMETRY;
    case swa::ErrorCode::kNoCircle: return SWA_ERR_NO_CIRCLE;
    case swa::ErrorCode::kSingularMatrix: return SWA_ERR_SINGULAR_MATRIX;
    case swa::ErrorCode::kIo: return SWA_ERR_IO;
    case swa::ErrorCode::kRuntime: return SWA_ERR_RUNTIME;
  }
  return SWA_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
swa_status guarded(F&& body) {
  try {
    last_error().clear();
    return body();
  } catch (const swa::Error& err) {
    return set_error(to_status(err.code()), err.what());
  } catch (const std::bad_alloc&) {
    return set_error(SWA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& err) {
    return set_error(SWA_ERR_INTERNAL, err.what());
  } catch (...) {
    return set_error(SWA_ERR_INTERNAL, "unknown error");
  }
}

swa_status null_argument(const char* name) {
  return set_error(SWA_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

swa_status copy_string(const std::string& s, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || capacity < s.size() + 1) {
    return set_error(SWA_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return SWA_OK;
}

swa::Vec2 to_vec(swa_vec2 v) { return {v.x, v.y}; }
swa_vec2 from_vec(const swa::Vec2& v) { return {v.x(), v.y()}; }

const swa::sim::ScenarioConfig& config_or_default(const swa_config* config) {
  static const swa::sim::ScenarioConfig defaults;
  return config ? config->rep : defaults;
}

swa::sim::RunMetrics to_core(const swa_run_metrics& m) {
  swa::sim::RunMetrics out;
  out.n_uavs = m.n_uavs;
  out.mode = std::string(swa::sim::to_string(m.mode == SWA_MODE_STANDALONE_BASELINE
                                                 ? swa::sim::Mode::kStandaloneBaseline
                                                 : swa::sim::Mode::kSwa));
  out.seed = m.seed;
  out.duration = m.duration;
  out.initial_d_nb = m.initial_d_nb;
  out.final_d_nb = m.final_d_nb;
  out.mean_d_nb = m.mean_d_nb;
  out.max_d_nb_ratio = m.max_d_nb_ratio;
  out.min_pair_dist = m.min_pair_dist;
  out.max_pair_dist = m.max_pair_dist;
  out.mean_v_drift = m.mean_v_drift;
  out.max_v_drift = m.max_v_drift;
  out.final_frame_norm = m.final_frame_norm;
  out.final_vel_std = m.final_vel_std;
  return out;
}

}  // namespace

extern "C" {

const char* swa_last_error(void) { return last_error().c_str(); }

const char* swa_status_string(swa_status status) {
  switch (status) {
    case SWA_OK: return "ok";
    case SWA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SWA_ERR_INVALID_CONFIG: return "invalid config";
    case SWA_ERR_DEGENERATE_GEOMETRY: return "degenerate geometry";
    case SWA_ERR_NO_CIRCLE: return "no circle";
    case SWA_ERR_SINGULAR_MATRIX: return "singular matrix";
    case SWA_ERR_IO: return "i/o error";
    case SWA_ERR_RUNTIME: return "runtime failure";
    case SWA_ERR_EMPTY: return "no neighbors";
    case SWA_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case SWA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* swa_version(void) { return "1.0.0"; }

// ---- configuration ----

swa_status swa_config_create(swa_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new swa_config{};
    return SWA_OK;
  });
}

swa_status swa_config_parse(const char* text, swa_config** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new swa_config{swa::sim::parse_config(text)};
    return SWA_OK;
  });
}

swa_status swa_config_load(const char* path, swa_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new swa_config{swa::sim::load_config(path)};
    return SWA_OK;
  });
}

swa_status swa_config_clone(const swa_config* config, swa_config** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new swa_config{config->rep};
    return SWA_OK;
  });
}

void swa_config_destroy(swa_config* config) { delete config; }

swa_status swa_config_set(swa_config* config, const char* key, const char* value) {
  if (!config) return null_argument("config");
  if (!key || !value) return null_argument("key/value");
  return guarded([&] {
    swa::sim::set_value(config->rep, key, value);
    return SWA_OK;
  });
}

swa_status swa_config_get(const swa_config* config, const char* key, char* buf, size_t capacity,
                          size_t* needed) {
  if (!config) return null_argument("config");
  if (!key) return null_argument("key");
  return guarded([&] { return copy_string(swa::sim::get_value(config->rep, key), buf, capacity, needed); });
}

swa_status swa_config_validate(const swa_config* config) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const auto problems = swa::sim::validate(config->rep);
    if (problems.empty()) return SWA_OK;
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    return set_error(SWA_ERR_INVALID_CONFIG, msg);
  });
}

swa_status swa_config_resolved(const swa_config* config, char* buf, size_t capacity,
                               size_t* needed) {
  if (!config) return null_argument("config");
  return guarded([&] { return copy_string(swa::sim::resolved_config(config->rep), buf, capacity, needed); });
}

swa_status swa_config_write_resolved(const swa_config* config, const char* path) {
  if (!config) return null_argument("config");
  if (!path) return null_argument("path");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) return set_error(SWA_ERR_IO, std::string("cannot write '") + path + "'");
    out << swa::sim::resolved_config(config->rep);
    if (!out) return set_error(SWA_ERR_IO, std::string("write failed for '") + path + "'");
    return SWA_OK;
  });
}

size_t swa_config_key_count(void) { return swa::sim::config_keys().size(); }

const char* swa_config_key(size_t index) {
  static const std::vector<std::string> keys = swa::sim::config_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

// ---- scenarios and logs ----

swa_status swa_run_scenario(const swa_config* config, swa_log** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto log = std::make_unique<swa_log>();
    log->rep = swa::sim::run_scenario(config->rep);
    log->mode = config->rep.mode;
    log->seed = config->rep.seed;
    *out = log.release();
    return SWA_OK;
  });
}

swa_status swa_log_read_csv(const char* path, const swa_config* config, swa_log** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& cfg = config_or_default(config);
    auto log = std::make_unique<swa_log>();
    log->rep = swa::sim::read_csv_file(path, cfg.dropout_time, cfg.settle_time);
    log->mode = cfg.mode;
    log->seed = cfg.seed;
    *out = log.release();
    return SWA_OK;
  });
}

void swa_log_destroy(swa_log* log) { delete log; }

size_t swa_log_row_count(const swa_log* log) { return log ? log->rep.rows.size() : 0; }

size_t swa_log_column_count(const swa_log* log) { return log ? log->rep.columns.size() : 0; }

int swa_log_uav_count(const swa_log* log) { return log ? log->rep.n_uavs : 0; }

const char* swa_log_column_name(const swa_log* log, size_t column) {
  if (!log || column >= log->rep.columns.size()) return nullptr;
  return log->rep.columns[column].c_str();
}

swa_status swa_log_column_index(const swa_log* log, const char* name, size_t* out) {
  if (!log) return null_argument("log");
  if (!name || !out) return null_argument("name/out");
  return guarded([&] {
    *out = log->rep.column(name);
    return SWA_OK;
  });
}

swa_status swa_log_value(const swa_log* log, size_t row, size_t column, double* out) {
  if (!log) return null_argument("log");
  if (!out) return null_argument("out");
  if (row >= log->rep.rows.size() || column >= log->rep.columns.size()) {
    return set_error(SWA_ERR_INVALID_ARGUMENT, "row or column out of range");
  }
  *out = log->rep.rows[row][column];
  return SWA_OK;
}

swa_status swa_log_write_csv(const swa_log* log, const char* path) {
  if (!log) return null_argument("log");
  if (!path) return null_argument("path");
  return guarded([&] {
    swa::sim::write_csv_file(path, log->rep);
    return SWA_OK;
  });
}

swa_status swa_write_schema(int n_uavs, const char* path) {
  if (!path) return null_argument("path");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) return set_error(SWA_ERR_IO, std::string("cannot write '") + path + "'");
    out << swa::sim::log_schema_json(n_uavs);
    return out ? SWA_OK : set_error(SWA_ERR_IO, std::string("write failed for '") + path + "'");
  });
}

swa_status swa_log_metrics(const swa_log* log, swa_run_metrics* out) {
  if (!log) return null_argument("log");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto m = swa::sim::compute_run_metrics(log->rep);
    *out = swa_run_metrics{m.n_uavs,
                           log->mode == swa::sim::Mode::kStandaloneBaseline ? SWA_MODE_STANDALONE_BASELINE
                                                                           : SWA_MODE_SWA,
                           log->seed,
                           m.duration,
                           m.initial_d_nb,
                           m.final_d_nb,
                           m.mean_d_nb,
                           m.max_d_nb_ratio,
                           m.min_pair_dist,
                           m.max_pair_dist,
                           m.mean_v_drift,
                           m.max_v_drift,
                           m.final_frame_norm,
                           m.final_vel_std};
    return SWA_OK;
  });
}

swa_status swa_write_metrics_csv(const swa_run_metrics* runs, size_t count, const char* path) {
  if (!runs && count > 0) return null_argument("runs");
  if (!path) return null_argument("path");
  return guarded([&] {
    std::vector<swa::sim::RunMetrics> rows;
    for (size_t i = 0; i < count; ++i) rows.push_back(to_core(runs[i]));
    swa::sim::write_metrics_csv_file(path, rows);
    return SWA_OK;
  });
}

// ---- analysis ----

swa_status swa_observability(int n, double dt, int absolute_index, swa_observability_report* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    auto sys = swa::analysis::build_combined_system(n, dt);
    if (absolute_index >= 0) sys = swa::analysis::with_absolute_position(sys, absolute_index);
    const auto check = swa::analysis::unobservable_basis_check(sys);
    *out = swa_observability_report{n,
                                    4 * n,
                                    check.rank,
                                    check.nullity,
                                    check.basis_in_null_space ? 1 : 0,
                                    check.spans_null_space ? 1 : 0,
                                    check.worst_ratio};
    return SWA_OK;
  });
}

swa_status swa_chi_square_inverse_cdf(double p, double dof, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = swa::analysis::chi_square_inverse_cdf(p, dof);
    return SWA_OK;
  });
}

swa_status swa_anees_bounds(int runs, int state_dim, double alpha, double* lower, double* upper) {
  if (!lower || !upper) return null_argument("lower/upper");
  return guarded([&] {
    const auto b = swa::analysis::anees_bounds(runs, state_dim, alpha);
    *lower = b.lower;
    *upper = b.upper;
    return SWA_OK;
  });
}

swa_status swa_nees(const double* error, const double* cov, int dim, double* out) {
  if (!error || !cov || !out) return null_argument("error/cov/out");
  if (dim < 1) return set_error(SWA_ERR_INVALID_ARGUMENT, "dim must be positive");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> e(error, dim);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> p(
        cov, dim, dim);
    *out = swa::analysis::nees(e, p);
    return SWA_OK;
  });
}

void swa_consistency_options_default(swa_consistency_options* out) {
  if (!out) return;
  const swa::analysis::ConsistencyConfig d;
  *out = swa_consistency_options{d.runs, d.duration, d.dt, d.f_p, d.f_a, d.warmup, d.alpha, d.seed};
}

swa_status swa_consistency_run(const swa_config* config, const swa_consistency_options* options,
                               swa_consistency** out) {
  if (!options) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    swa::analysis::ConsistencyConfig c;
    c.runs = options->runs;
    c.duration = options->duration;
    c.dt = options->dt;
    c.f_p = options->f_p;
    c.f_a = options->f_a;
    c.warmup = options->warmup;
    c.alpha = options->alpha;
    c.seed = options->seed;
    c.focal = config_or_default(config).focal;
    *out = new swa_consistency{swa::analysis::run_focal_consistency(c)};
    return SWA_OK;
  });
}

swa_status swa_consistency_summarize(const swa_consistency* result, swa_consistency_summary* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  const auto& r = result->rep;
  auto mean_from = [&](const std::vector<double>& v) {
    double sum = 0.0;
    for (std::size_t k = r.steady_first; k < v.size(); ++k) sum += v[k];
    return v.size() > r.steady_first ? sum / static_cast<double>(v.size() - r.steady_first) : 0.0;
  };
  *out = swa_consistency_summary{r.t.size(),
                                 r.steady_first,
                                 r.position.bounds.lower,
                                 r.position.bounds.upper,
                                 r.position_pass(),
                                 r.velocity_pass(),
                                 mean_from(r.position.anees),
                                 mean_from(r.velocity.anees)};
  return SWA_OK;
}

swa_status swa_consistency_write_csv(const swa_consistency* result, const char* path) {
  if (!result) return null_argument("result");
  if (!path) return null_argument("path");
  return guarded([&] {
    swa::analysis::write_anees_csv_file(path, result->rep);
    return SWA_OK;
  });
}

void swa_consistency_destroy(swa_consistency* result) { delete result; }

// ---- estimation building blocks ----

swa_status swa_estimate_frame(const swa_vec2* neighbors, size_t count, swa_vec2 hint, double radius,
                              swa_frame_estimate* out) {
  if (!neighbors && count > 0) return null_argument("neighbors");
  if (!out) return null_argument("out");
  return guarded([&] {
    std::vector<swa::Vec2> pts;
    for (size_t i = 0; i < count; ++i) pts.push_back(to_vec(neighbors[i]));
    const auto est = swa::frame::estimate_frame(pts, to_vec(hint), swa::frame::FrameParams{radius});
    if (!est) return set_error(SWA_ERR_EMPTY, "no neighbors");
    *out = swa_frame_estimate{from_vec(est->center), est->n_used, est->condition};
    return SWA_OK;
  });
}

swa_status swa_velocity_command(swa_vec2 position, swa_vec2 velocity, double k_p, double k_v,
                                double v_max, swa_vec2* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    swa::control::ControlParams params;
    params.k_p = k_p;
    params.k_v = k_v;
    params.v_max = v_max;
    swa::focal::FocalBelief state;
    state.belief.mean.setZero();
    state.belief.mean.head<2>() = to_vec(position);
    state.belief.mean.segment<2>(2) = to_vec(velocity);
    *out = from_vec(swa::control::compute_velocity_command(state, params));
    return SWA_OK;
  });
}

swa_status swa_track_bank_create(const swa_config* config, swa_track_bank** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new swa_track_bank{swa::surroundings::TrackBank(config_or_default(config).surroundings)};
    return SWA_OK;
  });
}

void swa_track_bank_destroy(swa_track_bank* bank) { delete bank; }

swa_status swa_track_bank_ingest(swa_track_bank* bank, uint32_t id, swa_vec2 z_body, double heading,
                                 double t, swa_ingest_outcome* outcome) {
  if (!bank) return null_argument("bank");
  return guarded([&] {
    const auto result = bank->rep.ingest(id, to_vec(z_body), heading, t);
    if (outcome) {
      switch (result) {
        case swa::surroundings::IngestOutcome::kCreated: *outcome = SWA_INGEST_CREATED; break;
        case swa::surroundings::IngestOutcome::kUpdated: *outcome = SWA_INGEST_UPDATED; break;
        case swa::surroundings::IngestOutcome::kDroppedOutOfOrder:
          *outcome = SWA_INGEST_DROPPED_OUT_OF_ORDER;
          break;
        case swa::surroundings::IngestOutcome::kGated: *outcome = SWA_INGEST_GATED; break;
      }
    }
    return SWA_OK;
  });
}

size_t swa_track_bank_prune(swa_track_bank* bank, double t) {
  return bank ? bank->rep.prune_stale(t) : 0;
}

size_t swa_track_bank_size(const swa_track_bank* bank) { return bank ? bank->rep.size() : 0; }

swa_status swa_track_bank_track(const swa_track_bank* bank, size_t index, swa_track* out) {
  if (!bank) return null_argument("bank");
  if (!out) return null_argument("out");
  if (index >= bank->rep.size()) return set_error(SWA_ERR_INVALID_ARGUMENT, "track index out of range");
  const auto& track = bank->rep.tracks()[index];
  *out = swa_track{track.id, from_vec(track.position()), from_vec(track.velocity()), track.last_seen};
  return SWA_OK;
}

swa_status swa_focal_create(const swa_config* config, double start, swa_focal** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new swa_focal{swa::focal::FocalEstimator(config_or_default(config).focal, start)};
    return SWA_OK;
  });
}

void swa_focal_destroy(swa_focal* focal) { delete focal; }

swa_status swa_focal_set_command(swa_focal* focal, swa_vec2 v_desired) {
  if (!focal) return null_argument("focal");
  focal->rep.set_command(to_vec(v_desired));
  return SWA_OK;
}

swa_status swa_focal_advance_to(swa_focal* focal, double t) {
  if (!focal) return null_argument("focal");
  return guarded([&] {
    focal->rep.advance_to(t);
    return SWA_OK;
  });
}

swa_status swa_focal_correct_position(swa_focal* focal, swa_vec2 frame_center, double t) {
  if (!focal) return null_argument("focal");
  return guarded([&] {
    swa::frame::FrameEstimate frame;
    frame.center = to_vec(frame_center);
    focal->rep.correct_position(frame, t);
    return SWA_OK;
  });
}

swa_status swa_focal_correct_imu(swa_focal* focal, double pitch, double roll, double heading,
                                 double stamp) {
  if (!focal) return null_argument("focal");
  return guarded([&] {
    focal->rep.correct_acceleration(swa::focal::ImuSample{pitch, roll, heading, stamp});
    return SWA_OK;
  });
}

swa_status swa_focal_state_get(const swa_focal* focal, swa_focal_state* out) {
  if (!focal) return null_argument("focal");
  if (!out) return null_argument("out");
  const auto& s = focal->rep.state();
  out->stamp = s.stamp;
  out->position = from_vec(s.position());
  out->velocity = from_vec(s.velocity());
  out->acceleration = from_vec(s.acceleration());
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) out->cov[r * 6 + c] = s.belief.cov(r, c);
  }
  return SWA_OK;
}

}  // extern "C"
