#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace swa {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

using AgentId = std::uint32_t;

// Seconds of simulated (or log) time.
using Seconds = double;

inline bool is_finite(const Vec2& v) { return v.allFinite(); }

}  // namespace swa
