#pragma once

#include <optional>
#include <span>

#include "core/types.hpp"

namespace swa::frame {

struct FrameParams {
  double radius = 10.0;  // m
};

/// Position of the floating control frame in the focal stable frame.
struct FrameEstimate {
  Vec2 center = Vec2::Zero();
  int n_used = 0;
  // Smallest singular value of the n x 3 design matrix [x y 1] taken about
  // the neighbor mean.
  double condition = 0.0;
};

// Least-squares circle fit through n >= 3 points. Throws kDegenerateGeometry
// when the design matrix has rank < 3 (collinear or repeated points).
FrameEstimate solve_center_general(std::span<const Vec2> neighbors, double radius);

// Circle of the given radius through two points; of the two centers the one
// nearer to `hint` wins, exact ties go to the center left of the chord n1->n2.
// Throws kNoCircle when |n1 - n2| > 2r and kDegenerateGeometry when n1 == n2.
FrameEstimate solve_center_two(const Vec2& n1, const Vec2& n2, const Vec2& hint, double radius);

// Point at distance r from n1 on the line through n1 and the hint, nearest to
// the hint. Throws kDegenerateGeometry when n1 coincides with the hint.
FrameEstimate solve_center_one(const Vec2& n1, const Vec2& hint, double radius);

// Dispatches on the neighbor count; std::nullopt for an empty neighborhood
// (caller keeps its previous frame).
std::optional<FrameEstimate> estimate_frame(std::span<const Vec2> neighbors, const Vec2& hint,
                                            const FrameParams& params);

}  // namespace swa::frame
