#include "analysis/focal_consistency.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/rng.hpp"

namespace swa::analysis {
namespace {

Vec6 draw(RngStream& rng, const Mat6& cov) {
  const Eigen::LLT<Mat6> llt(cov);
  if (llt.info() != Eigen::Success) fail(ErrorCode::kSingularMatrix, "covariance not positive definite");
  Vec6 w;
  for (int i = 0; i < 6; ++i) w[i] = rng.normal();
  return llt.matrixL() * w;
}

Vec2 draw(RngStream& rng, const Mat2& cov) {
  const Eigen::LLT<Mat2> llt(cov);
  if (llt.info() != Eigen::Success) fail(ErrorCode::kSingularMatrix, "covariance not positive definite");
  return llt.matrixL() * rng.normal2();
}

int period_steps(double rate, Seconds dt) {
  const double steps = 1.0 / (rate * dt);
  const long rounded = std::lround(steps);
  if (rounded < 1 || std::abs(steps - static_cast<double>(rounded)) > 1e-9) {
    fail(ErrorCode::kInvalidArgument, "rate is not a whole number of steps");
  }
  return static_cast<int>(rounded);
}

}  // namespace

ConsistencyResult run_focal_consistency(const ConsistencyConfig& config) {
  if (config.runs < 1) fail(ErrorCode::kInvalidArgument, "runs must be at least 1");
  if (!(config.dt > 0.0) || !(config.duration > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "dt and duration must be positive");
  }
  const int pos_period = period_steps(config.f_p, config.dt);
  const int acc_period = period_steps(config.f_a, config.dt);
  const int steps = static_cast<int>(std::lround(config.duration / config.dt));
  const auto& params = config.focal;
  const Mat6 f = focal::focal_transition(config.dt, params.tau);
  const auto b = focal::focal_input_matrix(config.dt, params.tau);

  std::vector<std::vector<double>> nees_pos(static_cast<std::size_t>(config.runs));
  std::vector<std::vector<double>> nees_vel(static_cast<std::size_t>(config.runs));
  ConsistencyResult result;

  for (int run = 0; run < config.runs; ++run) {
    const auto id = static_cast<std::uint64_t>(run);
    RngStream init_rng = rng_stream(config.seed, id, RngChannel::kInitialState);
    RngStream process_rng = rng_stream(config.seed, id, RngChannel::kProcessNoise);
    RngStream meas_rng = rng_stream(config.seed, id, RngChannel::kMeasurementNoise);
    RngStream imu_rng = rng_stream(config.seed, id, RngChannel::kImuNoise);
    const double phase = init_rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double tilt_sigma = std::sqrt(params.acceleration_noise(0, 0)) / params.tilt_to_accel;

    focal::FocalEstimator estimator(params, 0.0);
    Vec6 truth = estimator.state().belief.mean + draw(init_rng, params.initial_cov);

    for (int k = 1; k <= steps; ++k) {
      const Seconds t = k * config.dt;
      const Seconds t_prev = t - config.dt;
      const Vec2 command(2.0 * std::sin(0.3 * t_prev + phase), 1.5 * std::cos(0.2 * t_prev));
      estimator.set_command(command);
      truth = f * truth + b * command + draw(process_rng, params.process_noise);

      if (k % pos_period == 0) {
        frame::FrameEstimate fix;
        fix.center = -(truth.head<2>() + draw(meas_rng, params.position_noise));
        estimator.correct_position(fix, t);
      }
      if (k % acc_period == 0) {
        const double heading = 0.1 * t;
        const Vec2 tilt =
            Rot2(heading).transpose_times(truth.tail<2>()) / params.tilt_to_accel + imu_rng.normal2(tilt_sigma);
        estimator.correct_acceleration({tilt.x(), tilt.y(), heading, t});
      }
      estimator.advance_to(t);

      const auto& belief = estimator.state().belief;
      const Vec6 err = belief.mean - truth;
      nees_pos[static_cast<std::size_t>(run)].push_back(
          nees(err.head<2>(), belief.cov.block<2, 2>(0, 0)));
      nees_vel[static_cast<std::size_t>(run)].push_back(
          nees(err.segment<2>(2), belief.cov.block<2, 2>(2, 2)));
      if (run == 0) result.t.push_back(t);
    }
  }

  result.position = anees_from_nees(nees_pos, 2, config.alpha);
  result.velocity = anees_from_nees(nees_vel, 2, config.alpha);
  result.steady_first = 0;
  while (result.steady_first < result.t.size() && result.t[result.steady_first] < config.warmup) {
    ++result.steady_first;
  }
  return result;
}

void write_anees_csv(std::ostream& out, const ConsistencyResult& result) {
  out << "t,anees_pos,anees_vel,r1,r2\n";
  char buf[160];
  for (std::size_t k = 0; k < result.t.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g\n", result.t[k], result.position.anees[k],
                  result.velocity.anees[k], result.position.bounds.lower, result.position.bounds.upper);
    out << buf;
  }
}

void write_anees_csv_file(const std::string& path, const ConsistencyResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  write_anees_csv(out, result);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace swa::analysis
