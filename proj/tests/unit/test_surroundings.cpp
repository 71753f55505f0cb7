#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "analysis/consistency.hpp"
#include "core/error.hpp"
#include "support/oracles.hpp"
#include "surroundings/track_bank.hpp"

using namespace swa;
using namespace swa::surroundings;

namespace {

NeighborTrack make_track(const Vec6& mean, const Mat6& cov) {
  NeighborTrack t;
  t.belief.mean = mean;
  t.belief.cov = cov;
  return t;
}

Vec6 draw(std::mt19937_64& rng, const Mat6& cov) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec6 w;
  for (int i = 0; i < 6; ++i) w[i] = n(rng);
  return Eigen::LLT<Mat6>(cov).matrixL() * w;
}

}  // namespace

TEST(PredictTrack, ConstantVelocity) {
  const auto out = predict_track(make_track((Vec6() << 0, 0, 1, 0, 0, 0).finished(), Mat6::Identity()), 0.1, {});
  EXPECT_NEAR(out.position().x(), 0.1, 1e-15);
  EXPECT_NEAR(out.position().y(), 0.0, 1e-15);
  EXPECT_EQ(out.velocity(), Vec2(1, 0));
}

TEST(PredictTrack, ConstantAcceleration) {
  const auto out = predict_track(make_track((Vec6() << 0, 0, 0, 0, 2, 0).finished(), Mat6::Identity()), 0.1, {});
  EXPECT_NEAR(out.position().x(), 0.01, 1e-15);
  EXPECT_NEAR(out.velocity().x(), 0.2, 1e-15);
  EXPECT_EQ(out.belief.mean.tail<2>(), Vec2(2, 0));
}

TEST(PredictTrack, ZeroCovarianceGrowsByProcessNoise) {
  SurroundingsParams p;
  const auto out = predict_track(make_track(Vec6::Zero(), Mat6::Zero()), 0.37, p);
  EXPECT_EQ(out.belief.mean, Vec6::Zero());
  EXPECT_LT((out.belief.cov - p.process_noise).norm(), 1e-15);
}

TEST(PredictTrack, RejectsBadDt) {
  const auto t = make_track(Vec6::Zero(), Mat6::Identity());
  EXPECT_THROW(predict_track(t, 0.0, {}), Error);
  EXPECT_THROW(predict_track(t, -0.1, {}), Error);
  EXPECT_THROW(predict_track(t, std::nan(""), {}), Error);
}

TEST(CorrectTrack, HalfGainOnUnitPrior) {
  SurroundingsParams p;
  p.measurement_noise = Mat2::Identity();
  const auto out = correct_track(make_track(Vec6::Zero(), Mat6::Identity()), Vec2(1, 0), p);
  EXPECT_NEAR(out.position().x(), 0.5, 1e-15);
  EXPECT_NEAR(out.position().y(), 0.0, 1e-15);
  EXPECT_NEAR(out.belief.cov(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(out.belief.cov(1, 1), 0.5, 1e-15);
}

TEST(CorrectTrack, ZeroInnovationShrinksOnlyCovariance) {
  const Vec6 mean = (Vec6() << 3, -1, 0.5, 0.2, 0, 0).finished();
  const auto out = correct_track(make_track(mean, Mat6::Identity()), Vec2(3, -1), {});
  EXPECT_LT((out.belief.mean - mean).norm(), 1e-15);
  EXPECT_LT(out.belief.cov(0, 0), 1.0);
  EXPECT_LT(out.belief.cov(1, 1), 1.0);
}

TEST(CorrectTrack, UninformativeMeasurement) {
  SurroundingsParams p;
  p.measurement_noise = 1e9 * Mat2::Identity();
  const auto prior = make_track((Vec6() << 1, 2, 3, 4, 5, 6).finished(), Mat6::Identity());
  const auto out = correct_track(prior, Vec2(100, -100), p);
  EXPECT_LT((out.belief.mean - prior.belief.mean).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((out.belief.cov - prior.belief.cov).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CorrectTrack, SingularInnovationThrows) {
  SurroundingsParams p;
  p.measurement_noise = Mat2::Zero();
  EXPECT_THROW(correct_track(make_track(Vec6::Zero(), Mat6::Zero()), Vec2(1, 0), p), Error);
}

TEST(CorrectTrack, TraceMonotonicity) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  auto t = make_track(Vec6::Zero(), Mat6::Identity());
  SurroundingsParams p;
  for (int k = 0; k < 200; ++k) {
    const double before = t.belief.cov.trace();
    t = predict_track(t, 0.1, p);
    EXPECT_GE(t.belief.cov.trace(), before - 1e-12);
    const double mid = t.belief.cov.trace();
    t = correct_track(t, Vec2(n(rng), n(rng)), p);
    EXPECT_LE(t.belief.cov.trace(), mid + 1e-12);
  }
}

// Stacked least squares over x0..x5: prior residual, dynamics residuals
// weighted by Q^-1 and measurement residuals weighted by R^-1. The filtered
// estimate of x5 must equal the last block of the batch solution.
TEST(CorrectTrack, MatchesBatchWeightedLeastSquares) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  SurroundingsParams p;
  const double dt = 0.1;
  const Mat6 f = constant_acceleration_transition(dt);

  for (int trial = 0; trial < 20; ++trial) {
    Vec6 m0;
    for (int i = 0; i < 6; ++i) m0[i] = n(rng);
    Mat6 a;
    for (int i = 0; i < 36; ++i) a.data()[i] = 0.3 * n(rng);
    const Mat6 p0 = a * a.transpose() + 0.5 * Mat6::Identity();
    std::vector<Vec2> z;
    for (int k = 0; k < 5; ++k) z.emplace_back(5 * n(rng), 5 * n(rng));

    auto track = make_track(m0, p0);
    for (const auto& zk : z) track = correct_track(predict_track(track, dt, p), zk, p);

    const Vec6 x = oracle::batch_wls_final(m0, p0, z, f, p.process_noise, p.measurement_noise);
    EXPECT_LT((x - track.belief.mean).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
  }
}

TEST(TrackBank, CreatesTrackOnFirstDetection) {
  TrackBank bank;
  EXPECT_EQ(bank.ingest(4, Vec2(5, 0), 0.0, 1.0), IngestOutcome::kCreated);
  ASSERT_EQ(bank.size(), 1u);
  const auto& t = bank.tracks().front();
  EXPECT_EQ(t.id, 4u);
  EXPECT_EQ(t.position(), Vec2(5, 0));
  EXPECT_EQ(t.velocity(), Vec2(0, 0));
  EXPECT_LT((t.belief.cov.block<2, 2>(0, 0) - bank.params().measurement_noise).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(t.last_seen, 1.0);
}

TEST(TrackBank, UpdateIsConvexCombination) {
  TrackBank bank;
  bank.ingest(1, Vec2(5, 0), 0.0, 0.0);
  EXPECT_EQ(bank.ingest(1, Vec2(5.2, 0), 0.0, 0.1), IngestOutcome::kUpdated);
  const double x = bank.find(1)->position().x();
  EXPECT_GT(x, 5.0);
  EXPECT_LT(x, 5.2);
}

TEST(TrackBank, RotatesByHeading) {
  TrackBank bank;
  bank.ingest(1, Vec2(1, 0), std::numbers::pi / 2, 0.0);
  const Vec2 p = bank.find(1)->position();
  EXPECT_NEAR(p.x(), 0.0, 1e-15);
  EXPECT_NEAR(p.y(), -1.0, 1e-15);
}

TEST(TrackBank, RejectsNonFiniteWithoutChange) {
  TrackBank bank;
  bank.ingest(1, Vec2(1, 0), 0.0, 0.0);
  const Vec6 before = bank.find(1)->belief.mean;
  EXPECT_THROW(bank.ingest(1, Vec2(std::nan(""), 0), 0.0, 0.1), Error);
  EXPECT_THROW(bank.ingest(2, Vec2(INFINITY, 0), 0.0, 0.1), Error);
  EXPECT_EQ(bank.size(), 1u);
  EXPECT_EQ(bank.find(1)->belief.mean, before);
  EXPECT_DOUBLE_EQ(bank.find(1)->last_seen, 0.0);
}

TEST(TrackBank, DropsOutOfOrderDetections) {
  TrackBank bank;
  bank.ingest(1, Vec2(1, 0), 0.0, 1.0);
  EXPECT_EQ(bank.ingest(1, Vec2(9, 0), 0.0, 0.5), IngestOutcome::kDroppedOutOfOrder);
  EXPECT_EQ(bank.dropped_out_of_order(), 1u);
  EXPECT_EQ(bank.find(1)->position(), Vec2(1, 0));
}

TEST(TrackBank, OptionalGateRejectsOutliers) {
  SurroundingsParams p;
  p.gate_enabled = true;
  TrackBank bank(p);
  bank.ingest(1, Vec2(1, 0), 0.0, 0.0);
  EXPECT_EQ(bank.ingest(1, Vec2(50, 0), 0.0, 0.1), IngestOutcome::kGated);
  EXPECT_EQ(bank.gated(), 1u);
  EXPECT_EQ(bank.ingest(1, Vec2(1.1, 0), 0.0, 0.2), IngestOutcome::kUpdated);
}

TEST(TrackBank, PruneStale) {
  TrackBank bank;
  bank.ingest(1, Vec2(1, 0), 0.0, 0.0);
  bank.ingest(2, Vec2(2, 0), 0.0, 2.0);
  EXPECT_EQ(bank.prune_stale(3.0), 1u);  // id 1 last seen 3.0 s ago
  ASSERT_EQ(bank.size(), 1u);
  EXPECT_EQ(bank.tracks().front().id, 2u);  // last seen 1.0 s ago

  TrackBank empty;
  EXPECT_EQ(empty.prune_stale(10.0), 0u);
  EXPECT_TRUE(empty.empty());
}

TEST(TrackBank, CountEqualsDistinctRecentIds) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> id(0, 9);
  std::bernoulli_distribution seen(0.15);
  TrackBank bank;
  std::map<AgentId, double> last;
  for (int k = 1; k <= 600; ++k) {
    const double t = 0.1 * k;
    for (int j = 0; j < 10; ++j) {
      if (!seen(rng)) continue;
      const auto a = static_cast<AgentId>(id(rng));
      bank.ingest(a, Vec2(a, 1.0), 0.0, t);
      last[a] = t;
    }
    bank.prune_stale(t);
    std::size_t expected = 0;
    for (const auto& [a, ts] : last) {
      if (t - ts <= bank.params().stale_timeout) ++expected;
    }
    ASSERT_EQ(bank.size(), expected) << "t = " << t;
  }
}

// Truth follows the constant-acceleration model with Q_o; detections carry R_o
// noise. Averaged over 50 seeds the position NEES should sit inside the 95%
// band at nearly every step.
TEST(TrackBank, PositionNeesConsistentOverSeeds) {
  constexpr int kSeeds = 50;
  constexpr int kSteps = 500;
  const double dt = 0.1;
  SurroundingsParams p;
  const Mat6 f = constant_acceleration_transition(dt);
  std::vector<std::vector<double>> nees_runs;
  for (int s = 0; s < kSeeds; ++s) {
    std::mt19937_64 rng(1000 + s);
    std::normal_distribution<double> n(0.0, 1.0);
    const double sr = std::sqrt(p.measurement_noise(0, 0));
    Vec6 truth;
    truth << 10 * n(rng), 10 * n(rng), n(rng), n(rng), n(rng), n(rng);
    TrackBank bank(p);
    bank.ingest(0, truth.head<2>() + Vec2(sr * n(rng), sr * n(rng)), 0.0, 0.0);
    std::vector<double> run;
    for (int k = 1; k <= kSteps; ++k) {
      truth = f * truth + draw(rng, p.process_noise);
      bank.ingest(0, truth.head<2>() + Vec2(sr * n(rng), sr * n(rng)), 0.0, k * dt);
      const auto& b = bank.find(0)->belief;
      run.push_back(analysis::nees(b.mean.head<2>() - truth.head<2>(), b.cov.block<2, 2>(0, 0)));
    }
    nees_runs.push_back(std::move(run));
  }
  const auto report = analysis::anees_from_nees(nees_runs, 2);
  EXPECT_GE(report.pass_fraction, 0.9);
}
