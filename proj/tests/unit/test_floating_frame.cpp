#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "core/error.hpp"
#include "core/geometry.hpp"
#include "floating_frame/floating_frame.hpp"
#include "support/oracles.hpp"

using namespace swa;
using namespace swa::frame;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kRuntime;
}

}  // namespace

TEST(SolveGeneral, SymmetricPoints) {
  const std::vector<Vec2> pts{{10, 0}, {0, 10}, {-10, 0}};
  const auto est = solve_center_general(pts, 10.0);
  EXPECT_LT(est.center.norm(), 1e-12);
  EXPECT_EQ(est.n_used, 3);
  EXPECT_GT(est.condition, 0.0);
}

TEST(SolveGeneral, OffRadiusPointsMatchBruteForce) {
  const std::vector<Vec2> pts{{11, 0}, {0, 11}, {-11, 0}};
  const auto est = solve_center_general(pts, 10.0);
  const Vec2 expected = oracle::brute_force_center(pts);
  EXPECT_NEAR(est.center.x(), 0.0, 1e-9);
  EXPECT_LT((est.center - expected).norm(), 1e-6);
}

TEST(SolveGeneral, CollinearIsDegenerate) {
  const std::vector<Vec2> pts{{1, 0}, {2, 0}, {3, 0}};
  EXPECT_EQ(code_of([&] { solve_center_general(pts, 10.0); }), ErrorCode::kDegenerateGeometry);
}

TEST(SolveGeneral, RecoversCentersOfExactCircles) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-50, 50);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  std::uniform_int_distribution<int> count(3, 8);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 c(u(rng), u(rng));
    const double r = 10.0;
    std::vector<Vec2> pts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double a = ang(rng);
      pts.push_back(c + r * Vec2(std::cos(a), std::sin(a)));
    }
    EXPECT_LT((solve_center_general(pts, r).center - c).norm(), 1e-9);
  }
}

TEST(SolveTwo, PicksCandidateNearerHint) {
  const auto est = solve_center_two({5, 5}, {5, -5}, {0, 0}, 10.0);
  EXPECT_NEAR(est.center.x(), 5.0 - std::sqrt(75.0), 1e-12);
  EXPECT_NEAR(est.center.y(), 0.0, 1e-12);
}

TEST(SolveTwo, DiameterChordHasUniqueCenter) {
  for (const Vec2 hint : {Vec2(0, 0), Vec2(3, 7), Vec2(-4, -9)}) {
    const auto est = solve_center_two({-10, 0}, {10, 0}, hint, 10.0);
    EXPECT_LT(est.center.norm(), 1e-12);
  }
}

TEST(SolveTwo, Errors) {
  EXPECT_EQ(code_of([] { solve_center_two({0, 0}, {30, 0}, {0, 0}, 10.0); }), ErrorCode::kNoCircle);
  EXPECT_EQ(code_of([] { solve_center_two({1, 1}, {1, 1}, {0, 0}, 10.0); }),
            ErrorCode::kDegenerateGeometry);
}

TEST(SolveTwo, TieGoesToLeftOfChord) {
  // Hint on the chord midpoint: both candidates are equally near.
  const auto est = solve_center_two({0, 0}, {10, 0}, {5, 0}, 10.0);
  EXPECT_NEAR(est.center.x(), 5.0, 1e-12);
  EXPECT_GT(est.center.y(), 0.0);
}

TEST(SolveTwo, CandidatesLieAtRadius) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-8, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec2 a(u(rng), u(rng));
    const Vec2 b(u(rng), u(rng));
    const Vec2 hint(u(rng), u(rng));
    if ((a - b).norm() > 20.0 || (a - b).norm() < 1e-6) continue;
    const auto est = solve_center_two(a, b, hint, 10.0);
    EXPECT_NEAR((est.center - a).norm(), 10.0, 1e-9);
    EXPECT_NEAR((est.center - b).norm(), 10.0, 1e-9);
  }
}

TEST(SolveOne, Examples) {
  EXPECT_LT((solve_center_one({6, 8}, {0, 0}, 10.0).center - Vec2(0, 0)).norm(), 1e-12);
  EXPECT_LT((solve_center_one({20, 0}, {0, 0}, 10.0).center - Vec2(10, 0)).norm(), 1e-12);
  EXPECT_LT((solve_center_one({10, 0}, {0, 0}, 10.0).center - Vec2(0, 0)).norm(), 1e-12);
  EXPECT_EQ(code_of([] { solve_center_one({1, 2}, {1, 2}, 10.0); }), ErrorCode::kDegenerateGeometry);
}

TEST(EstimateFrame, Dispatch) {
  const std::vector<Vec2> three{{10, 0}, {0, 10}, {-10, 0}};
  EXPECT_EQ(estimate_frame(three, Vec2::Zero(), {})->n_used, 3);
  const std::vector<Vec2> one{{20, 0}};
  const auto est = estimate_frame(one, Vec2::Zero(), {});
  ASSERT_TRUE(est.has_value());
  EXPECT_EQ(est->n_used, 1);
  EXPECT_LT((est->center - Vec2(10, 0)).norm(), 1e-12);
  EXPECT_FALSE(estimate_frame(std::vector<Vec2>{}, Vec2::Zero(), {}).has_value());
}

TEST(EstimateFrame, TranslationEquivariance) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-9, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 shift(u(rng) * 10, u(rng) * 10);
    const Vec2 hint(u(rng), u(rng));
    for (int n = 1; n <= 4; ++n) {
      std::vector<Vec2> pts, moved;
      for (int i = 0; i < n; ++i) {
        pts.emplace_back(u(rng), u(rng));
        moved.push_back(pts.back() + shift);
      }
      try {
        const auto a = estimate_frame(pts, hint, {});
        const auto b = estimate_frame(moved, hint + shift, {});
        EXPECT_LT((b->center - (a->center + shift)).norm(), 1e-9 * (1.0 + a->center.norm())) << "n = " << n;
      } catch (const Error&) {
        // Degenerate draw; the shifted set must fail the same way.
        EXPECT_THROW(estimate_frame(moved, hint + shift, {}), Error);
      }
    }
  }
}

TEST(EstimateFrame, RotationEquivarianceOfGeneralSolver) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-15, 15);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 300; ++trial) {
    const Rot2 rot(ang(rng));
    std::vector<Vec2> pts, turned;
    for (int i = 0; i < 5; ++i) {
      pts.emplace_back(u(rng), u(rng));
      turned.push_back(rot * pts.back());
    }
    const Vec2 a = solve_center_general(pts, 10.0).center;
    const Vec2 b = solve_center_general(turned, 10.0).center;
    EXPECT_LT((b - rot * a).norm(), 1e-9 * (1.0 + a.norm()));
  }
}
