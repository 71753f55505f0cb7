#pragma once

#include <span>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace swa::analysis {

using IndexPair = std::pair<std::size_t, std::size_t>;

// Mean Euclidean distance over the given pairs. Throws on an empty pair set.
double metric_neighbor_distance(std::span<const Vec2> positions, std::span<const IndexPair> pairs);

// Unordered pairs {i, j} where j is among the `cap` nearest UAVs of i (ties by
// index). This is the neighbor-pair convention used in exported logs.
std::vector<IndexPair> nearest_neighbor_pairs(std::span<const Vec2> positions, int cap);

// Centroid velocity by central differences, one-sided at the ends. Throws for
// fewer than two samples.
std::vector<Vec2> metric_drift_velocity(std::span<const Vec2> centroids, double dt);

Vec2 centroid(std::span<const Vec2> positions);

}  // namespace swa::analysis
