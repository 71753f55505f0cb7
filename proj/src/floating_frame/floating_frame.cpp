#include "floating_frame/floating_frame.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/linalg.hpp"

namespace swa::frame {
namespace {

constexpr double kCoincidentTolerance = 1e-9;

Vec2 mean_of(std::span<const Vec2> points) {
  Vec2 m = Vec2::Zero();
  for (const auto& p : points) m += p;
  return points.empty() ? m : Vec2(m / static_cast<double>(points.size()));
}

// Rows [x y 1] of the points relative to `origin`; centering on the mean keeps
// the fit exact under translation.
Eigen::MatrixXd design_matrix(std::span<const Vec2> points, const Vec2& origin) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    a(row, 0) = points[j].x() - origin.x();
    a(row, 1) = points[j].y() - origin.y();
    a(row, 2) = 1.0;
  }
  return a;
}

double smallest_singular_value(std::span<const Vec2> points) {
  const Eigen::VectorXd sv = linalg::singular_values(design_matrix(points, mean_of(points)));
  return sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
}

void check_radius(double radius) {
  if (!std::isfinite(radius) || radius <= 0.0) {
    fail(ErrorCode::kInvalidArgument, "frame radius must be positive");
  }
}

}  // namespace

FrameEstimate solve_center_general(std::span<const Vec2> neighbors, double radius) {
  check_radius(radius);
  if (neighbors.size() < 3) {
    fail(ErrorCode::kInvalidArgument, "general circle fit needs at least 3 neighbors");
  }
  const Vec2 origin = mean_of(neighbors);
  const Eigen::MatrixXd a = design_matrix(neighbors, origin);
  const Eigen::VectorXd sv = linalg::singular_values(a);
  if (linalg::numerical_rank(a) < 3) {
    fail(ErrorCode::kDegenerateGeometry, "neighbors are collinear");
  }

  Eigen::VectorXd b(a.rows());
  for (std::size_t j = 0; j < neighbors.size(); ++j) {
    b(static_cast<Eigen::Index>(j)) = (neighbors[j] - origin).squaredNorm() - radius * radius;
  }
  // x = [a, b, c] with a = 2 x_c, b = 2 y_c.
  const Eigen::VectorXd x = linalg::pseudo_inverse(a) * b;

  FrameEstimate out;
  out.center = origin + Vec2(x(0) / 2.0, x(1) / 2.0);
  out.n_used = static_cast<int>(neighbors.size());
  out.condition = sv(sv.size() - 1);
  return out;
}

FrameEstimate solve_center_two(const Vec2& n1, const Vec2& n2, const Vec2& hint, double radius) {
  check_radius(radius);
  const Vec2 chord = n2 - n1;
  const double d = chord.norm();
  if (d < kCoincidentTolerance) {
    fail(ErrorCode::kDegenerateGeometry, "neighbors coincide");
  }
  if (d > 2.0 * radius) {
    fail(ErrorCode::kNoCircle, "neighbors are farther apart than the frame diameter");
  }
  const Vec2 mid = 0.5 * (n1 + n2);
  const double half = 0.5 * d;
  const double offset = std::sqrt(std::max(0.0, radius * radius - half * half));
  const Vec2 left(-chord.y() / d, chord.x() / d);

  const Vec2 left_center = mid + offset * left;
  const Vec2 right_center = mid - offset * left;

  FrameEstimate out;
  out.center = (right_center - hint).squaredNorm() < (left_center - hint).squaredNorm()
                   ? right_center
                   : left_center;
  out.n_used = 2;
  const Vec2 pts[] = {n1, n2};
  out.condition = smallest_singular_value(pts);
  return out;
}

FrameEstimate solve_center_one(const Vec2& n1, const Vec2& hint, double radius) {
  check_radius(radius);
  const Vec2 to_hint = hint - n1;
  const double d = to_hint.norm();
  if (d < kCoincidentTolerance) {
    fail(ErrorCode::kDegenerateGeometry, "neighbor coincides with the focal UAV");
  }
  // Of n1 +- r*u, the '+' candidate is always the one nearer the hint.
  FrameEstimate out;
  out.center = n1 + (radius / d) * to_hint;
  out.n_used = 1;
  const Vec2 pts[] = {n1};
  out.condition = smallest_singular_value(pts);
  return out;
}

std::optional<FrameEstimate> estimate_frame(std::span<const Vec2> neighbors, const Vec2& hint,
                                            const FrameParams& params) {
  switch (neighbors.size()) {
    case 0:
      return std::nullopt;
    case 1:
      return solve_center_one(neighbors[0], hint, params.radius);
    case 2:
      return solve_center_two(neighbors[0], neighbors[1], hint, params.radius);
    default:
      return solve_center_general(neighbors, params.radius);
  }
}

}  // namespace swa::frame
