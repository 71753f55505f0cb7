#ifndef SWA_SWA_H
#define SWA_SWA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SWA_API __declspec(dllexport)
#else
#define SWA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swa_status {
  SWA_OK = 0,
  SWA_ERR_INVALID_ARGUMENT = 1,
  SWA_ERR_INVALID_CONFIG = 2,
  SWA_ERR_DEGENERATE_GEOMETRY = 3,
  SWA_ERR_NO_CIRCLE = 4,
  SWA_ERR_SINGULAR_MATRIX = 5,
  SWA_ERR_IO = 6,
  SWA_ERR_RUNTIME = 7,
  SWA_ERR_EMPTY = 8,            /* no neighbors: hold the last frame */
  SWA_ERR_BUFFER_TOO_SMALL = 9, /* *needed holds the required size */
  SWA_ERR_INTERNAL = 10
} swa_status;

typedef enum swa_mode { SWA_MODE_SWA = 0, SWA_MODE_STANDALONE_BASELINE = 1 } swa_mode;

typedef struct swa_vec2 {
  double x;
  double y;
} swa_vec2;

/* Message for the last failing call on this thread; never NULL. */
SWA_API const char* swa_last_error(void);
SWA_API const char* swa_status_string(swa_status status);
SWA_API const char* swa_version(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct swa_config swa_config;

SWA_API swa_status swa_config_create(swa_config** out);
/* `key = value` lines; errors name every offending key. */
SWA_API swa_status swa_config_parse(const char* text, swa_config** out);
SWA_API swa_status swa_config_load(const char* path, swa_config** out);
SWA_API swa_status swa_config_clone(const swa_config* config, swa_config** out);
SWA_API void swa_config_destroy(swa_config* config);

SWA_API swa_status swa_config_set(swa_config* config, const char* key, const char* value);
/* String buffers: on SWA_ERR_BUFFER_TOO_SMALL, *needed (including the
   terminator) tells the caller how much to allocate. `needed` may be NULL. */
SWA_API swa_status swa_config_get(const swa_config* config, const char* key, char* buf,
                                  size_t capacity, size_t* needed);
/* SWA_ERR_INVALID_CONFIG with one problem per line in swa_last_error(). */
SWA_API swa_status swa_config_validate(const swa_config* config);
SWA_API swa_status swa_config_resolved(const swa_config* config, char* buf, size_t capacity,
                                       size_t* needed);
SWA_API swa_status swa_config_write_resolved(const swa_config* config, const char* path);
SWA_API size_t swa_config_key_count(void);
SWA_API const char* swa_config_key(size_t index);

/* ---- scenarios and logs ----------------------------------------------- */

typedef struct swa_log swa_log;

/* SWA_ERR_INVALID_CONFIG before stepping, SWA_ERR_RUNTIME (message names the
   step) during stepping. */
SWA_API swa_status swa_run_scenario(const swa_config* config, swa_log** out);
/* Reads a log written by swa_log_write_csv. Dropout time, settle time, mode and
   seed are taken from `config` (defaults when NULL). */
SWA_API swa_status swa_log_read_csv(const char* path, const swa_config* config, swa_log** out);
SWA_API void swa_log_destroy(swa_log* log);

SWA_API size_t swa_log_row_count(const swa_log* log);
SWA_API size_t swa_log_column_count(const swa_log* log);
SWA_API int swa_log_uav_count(const swa_log* log);
SWA_API const char* swa_log_column_name(const swa_log* log, size_t column);
SWA_API swa_status swa_log_column_index(const swa_log* log, const char* name, size_t* out);
SWA_API swa_status swa_log_value(const swa_log* log, size_t row, size_t column, double* out);
SWA_API swa_status swa_log_write_csv(const swa_log* log, const char* path);

/* JSON description of the log, metrics, anees and summary CSV columns. */
SWA_API swa_status swa_write_schema(int n_uavs, const char* path);

typedef struct swa_run_metrics {
  int n_uavs;
  swa_mode mode;
  uint64_t seed;
  double duration;
  double initial_d_nb;
  double final_d_nb;
  double mean_d_nb;
  double max_d_nb_ratio;
  double min_pair_dist;
  double max_pair_dist;
  double mean_v_drift;
  double max_v_drift;
  double final_frame_norm;
  double final_vel_std;
} swa_run_metrics;

SWA_API swa_status swa_log_metrics(const swa_log* log, swa_run_metrics* out);
SWA_API swa_status swa_write_metrics_csv(const swa_run_metrics* runs, size_t count,
                                         const char* path);

/* ---- analysis ----------------------------------------------------------- */

typedef struct swa_observability_report {
  int n;
  int state_dim;
  int rank;
  int nullity;
  int basis_in_null_space; /* 1 when every translation basis vector satisfies |O v| <= 1e-9 |O| |v| */
  int spans_null_space;    /* 1 when those vectors span the whole null space */
  double worst_ratio;
} swa_observability_report;

/* Combined swarm of n double integrators with relative position measurements
   between every ordered pair. absolute_index >= 0 adds an absolute position
   measurement for that UAV; -1 adds none. */
SWA_API swa_status swa_observability(int n, double dt, int absolute_index,
                                     swa_observability_report* out);

SWA_API swa_status swa_chi_square_inverse_cdf(double p, double dof, double* out);
SWA_API swa_status swa_anees_bounds(int runs, int state_dim, double alpha, double* lower,
                                    double* upper);
/* cov is dim x dim, row-major. */
SWA_API swa_status swa_nees(const double* error, const double* cov, int dim, double* out);

typedef struct swa_consistency_options {
  int runs;
  double duration;
  double dt;
  double f_p;
  double f_a;
  double warmup;
  double alpha;
  uint64_t seed;
} swa_consistency_options;

typedef struct swa_consistency_summary {
  size_t steps;
  size_t steady_first;
  double lower;
  double upper;
  double position_pass; /* fraction of steady-state steps inside [lower, upper] */
  double velocity_pass;
  double mean_anees_position;
  double mean_anees_velocity;
} swa_consistency_summary;

typedef struct swa_consistency swa_consistency;

SWA_API void swa_consistency_options_default(swa_consistency_options* out);
/* Focal estimator parameters come from `config` (defaults when NULL). */
SWA_API swa_status swa_consistency_run(const swa_config* config,
                                       const swa_consistency_options* options,
                                       swa_consistency** out);
SWA_API swa_status swa_consistency_summarize(const swa_consistency* result,
                                             swa_consistency_summary* out);
SWA_API swa_status swa_consistency_write_csv(const swa_consistency* result, const char* path);
SWA_API void swa_consistency_destroy(swa_consistency* result);

/* ---- estimation building blocks ---------------------------------------- */

typedef struct swa_frame_estimate {
  swa_vec2 center;
  int n_used;
  double condition;
} swa_frame_estimate;

/* SWA_ERR_EMPTY for zero neighbors. */
SWA_API swa_status swa_estimate_frame(const swa_vec2* neighbors, size_t count, swa_vec2 hint,
                                      double radius, swa_frame_estimate* out);

SWA_API swa_status swa_velocity_command(swa_vec2 position, swa_vec2 velocity, double k_p,
                                        double k_v, double v_max, swa_vec2* out);

typedef enum swa_ingest_outcome {
  SWA_INGEST_CREATED = 0,
  SWA_INGEST_UPDATED = 1,
  SWA_INGEST_DROPPED_OUT_OF_ORDER = 2,
  SWA_INGEST_GATED = 3
} swa_ingest_outcome;

typedef struct swa_track {
  uint32_t id;
  swa_vec2 position;
  swa_vec2 velocity;
  double last_seen;
} swa_track;

typedef struct swa_track_bank swa_track_bank;

/* Surroundings parameters come from `config` (defaults when NULL). */
SWA_API swa_status swa_track_bank_create(const swa_config* config, swa_track_bank** out);
SWA_API void swa_track_bank_destroy(swa_track_bank* bank);
SWA_API swa_status swa_track_bank_ingest(swa_track_bank* bank, uint32_t id, swa_vec2 z_body,
                                         double heading, double t, swa_ingest_outcome* outcome);
SWA_API size_t swa_track_bank_prune(swa_track_bank* bank, double t);
SWA_API size_t swa_track_bank_size(const swa_track_bank* bank);
SWA_API swa_status swa_track_bank_track(const swa_track_bank* bank, size_t index, swa_track* out);

typedef struct swa_focal_state {
  double stamp;
  swa_vec2 position;
  swa_vec2 velocity;
  swa_vec2 acceleration;
  double cov[36]; /* row-major, order [p, v, a] */
} swa_focal_state;

typedef struct swa_focal swa_focal;

/* Focal parameters come from `config` (defaults when NULL). */
SWA_API swa_status swa_focal_create(const swa_config* config, double start, swa_focal** out);
SWA_API void swa_focal_destroy(swa_focal* focal);
SWA_API swa_status swa_focal_set_command(swa_focal* focal, swa_vec2 v_desired);
SWA_API swa_status swa_focal_advance_to(swa_focal* focal, double t);
/* frame_center is the fitted circle center in the stable frame. */
SWA_API swa_status swa_focal_correct_position(swa_focal* focal, swa_vec2 frame_center, double t);
SWA_API swa_status swa_focal_correct_imu(swa_focal* focal, double pitch, double roll,
                                         double heading, double stamp);
SWA_API swa_status swa_focal_state_get(const swa_focal* focal, swa_focal_state* out);

#ifdef __cplusplus
}
#endif

#endif
