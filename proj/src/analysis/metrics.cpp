#include "analysis/metrics.hpp"

#include <algorithm>
#include <set>

#include "core/error.hpp"

namespace swa::analysis {

double metric_neighbor_distance(std::span<const Vec2> positions, std::span<const IndexPair> pairs) {
  if (pairs.empty()) fail(ErrorCode::kInvalidArgument, "neighbor distance: empty pair set");
  double sum = 0.0;
  for (const auto& [i, j] : pairs) {
    if (i >= positions.size() || j >= positions.size()) {
      fail(ErrorCode::kInvalidArgument, "neighbor distance: pair index out of range");
    }
    sum += (positions[i] - positions[j]).norm();
  }
  return sum / static_cast<double>(pairs.size());
}

std::vector<IndexPair> nearest_neighbor_pairs(std::span<const Vec2> positions, int cap) {
  std::set<IndexPair> unique;
  const std::size_t n = positions.size();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return (positions[a] - positions[i]).squaredNorm() <
             (positions[b] - positions[i]).squaredNorm();
    });
    const std::size_t take = std::min(order.size(), static_cast<std::size_t>(std::max(cap, 0)));
    for (std::size_t k = 0; k < take; ++k) {
      unique.insert({std::min(i, order[k]), std::max(i, order[k])});
    }
  }
  return {unique.begin(), unique.end()};
}

std::vector<Vec2> metric_drift_velocity(std::span<const Vec2> centroids, double dt) {
  if (centroids.size() < 2) fail(ErrorCode::kInvalidArgument, "drift velocity: need 2 samples");
  const std::size_t n = centroids.size();
  std::vector<Vec2> out(n);
  out.front() = (centroids[1] - centroids[0]) / dt;
  out.back() = (centroids[n - 1] - centroids[n - 2]) / dt;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out[k] = (centroids[k + 1] - centroids[k - 1]) / (2.0 * dt);
  }
  return out;
}

Vec2 centroid(std::span<const Vec2> positions) {
  Vec2 sum = Vec2::Zero();
  for (const auto& p : positions) sum += p;
  return positions.empty() ? sum : Vec2(sum / static_cast<double>(positions.size()));
}

}  // namespace swa::analysis
