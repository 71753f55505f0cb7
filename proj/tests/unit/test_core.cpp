#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "core/belief.hpp"
#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/linalg.hpp"

using namespace swa;

namespace {

constexpr double kPi = std::numbers::pi;

Rot2 random_rot(std::mt19937_64& rng) {
  return Rot2(std::uniform_real_distribution<double>(-kPi, kPi)(rng));
}

}  // namespace

TEST(Rotation, BodyToStableExamples) {
  const Vec2 a = rotate_body_to_stable({1, 0}, Rot2::identity());
  EXPECT_DOUBLE_EQ(a.x(), 1.0);
  EXPECT_DOUBLE_EQ(a.y(), 0.0);

  const Vec2 b = rotate_body_to_stable({1, 0}, Rot2(kPi / 2));
  EXPECT_NEAR(b.x(), 0.0, 1e-15);
  EXPECT_NEAR(b.y(), -1.0, 1e-15);

  const Vec2 c = rotate_body_to_stable(Vec2::Zero(), Rot2(0.7));
  EXPECT_EQ(c, Vec2::Zero());
}

TEST(Rotation, OrthonormalForRandomAngles) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Rot2 r = random_rot(rng);
    const Mat2 m = r.matrix();
    EXPECT_LT((m * m.transpose() - Mat2::Identity()).norm(), 1e-12);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
    EXPECT_LT((r.inverse().matrix() - m.transpose()).norm(), 1e-12);
  }
}

TEST(Rotation, StableBodyRoundTrip) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Rot2 r = random_rot(rng);
    const Vec2 v(n(rng), n(rng));
    EXPECT_LT((rotate_body_to_stable(rotate_stable_to_body(v, r), r) - v).norm(), 1e-12);
  }
}

TEST(Pose, ComposeWithInverseIsIdentity) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Pose2 p{random_rot(rng), Vec2(n(rng), n(rng))};
    const Pose2 id = p * p.inverse();
    EXPECT_LT(id.translation.norm(), 1e-12);
    EXPECT_NEAR(std::remainder(id.rotation.angle(), 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Pose, CompositionIsAssociative) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0.0, 3.0);
  const Vec2 probe(1.5, -2.0);
  for (int i = 0; i < 200; ++i) {
    const Pose2 a{random_rot(rng), Vec2(n(rng), n(rng))};
    const Pose2 b{random_rot(rng), Vec2(n(rng), n(rng))};
    const Pose2 c{random_rot(rng), Vec2(n(rng), n(rng))};
    const Vec2 lhs = ((a * b) * c).apply(probe);
    const Vec2 rhs = (a * (b * c)).apply(probe);
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(linalg::numerical_rank(Eigen::MatrixXd::Identity(4, 4)), 4);
  EXPECT_EQ(linalg::numerical_rank(Eigen::MatrixXd::Ones(3, 3)), 1);
  EXPECT_EQ(linalg::numerical_rank(Eigen::MatrixXd::Zero(3, 5)), 0);
}

TEST(PseudoInverse, NormalEquationsMatchSvd) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd a(5, 3);
    for (int i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
    ASSERT_EQ(linalg::numerical_rank(a), 3);
    const Eigen::MatrixXd p = linalg::pseudo_inverse(a);
    EXPECT_LT((p - linalg::pseudo_inverse_svd(a)).norm(), 1e-8);
    EXPECT_LT((a * p * a - a).norm(), 1e-8);
  }
}

TEST(PseudoInverse, RankDeficientFallsBackToSvd) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 1, 2, 2, 1, 3, 3, 1;  // first two columns equal
  const Eigen::MatrixXd p = linalg::pseudo_inverse(a);
  EXPECT_TRUE(p.allFinite());
  EXPECT_LT((a * p * a - a).norm(), 1e-8);
  EXPECT_LT((p * a * p - p).norm(), 1e-8);
}

TEST(InvertSpd, InvertsAndRejectsIndefinite) {
  Eigen::MatrixXd m(2, 2);
  m << 4, 1, 1, 3;
  EXPECT_LT((linalg::invert_spd(m) * m - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  EXPECT_THROW(linalg::invert_spd(bad), Error);
}

TEST(Belief, CovarianceStaysPsdOverManyCycles) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.001, 0.2);
  Belief6 b;
  const Mat6 q = (Vec6() << 1e-3, 1e-3, 1e-2, 1e-2, 1e-1, 1e-1).finished().asDiagonal();
  const Mat2 r = 0.1 * Mat2::Identity();
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h.leftCols<2>().setIdentity();
  double worst = 1.0;
  for (int k = 0; k < 10000; ++k) {
    const double dt = u(rng);
    Mat6 f = Mat6::Identity();
    f.block<2, 2>(0, 2).diagonal().setConstant(dt);
    f.block<2, 2>(2, 4).diagonal().setConstant(dt);
    f.block<2, 2>(0, 4).diagonal().setConstant(0.5 * dt * dt);
    b = kalman_predict(b, f, Vec6::Zero(), q);
    b = kalman_correct<6, 2>(b, h, Vec2(n(rng), n(rng)), r);
    EXPECT_LT((b.cov - b.cov.transpose()).norm(), 1e-9);
    worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Mat6>(b.cov).eigenvalues().minCoeff());
  }
  EXPECT_GE(worst, -1e-9);
}

TEST(Belief, SingularInnovationThrows) {
  Belief6 b;
  b.cov.setZero();
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h.leftCols<2>().setIdentity();
  try {
    kalman_correct<6, 2>(b, h, Vec2(1, 0), Mat2::Zero());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularMatrix);
  }
}
