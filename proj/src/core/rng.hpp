#pragma once

#include <cstdint>
#include <random>

#include "core/types.hpp"

namespace swa {

enum class RngChannel : std::uint32_t {
  kHeading = 1,
  kImuBias = 2,
  kImuNoise = 3,
  kInitialState = 4,
  kProcessNoise = 5,
  kMeasurementNoise = 6,
  // Detections use one stream per (observer, target): kDetection + target id.
  kDetection = 1000,
};

/// Deterministic normal/uniform source. Streams keyed by (seed, agent, channel)
/// are independent, so adding agents does not change other agents' draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t agent, std::uint64_t channel) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(agent), static_cast<std::uint32_t>(agent >> 32),
                      static_cast<std::uint32_t>(channel),
                      static_cast<std::uint32_t>(channel >> 32)};
    engine_.seed(seq);
  }

  double normal(double sigma = 1.0) {
    return sigma == 0.0 ? 0.0 : sigma * normal_(engine_);
  }

  Vec2 normal2(double sigma = 1.0) {
    const double x = normal(sigma);
    return {x, normal(sigma)};
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RngStream rng_stream(std::uint64_t seed, std::uint64_t agent, RngChannel channel,
                            std::uint64_t sub = 0) {
  return RngStream(seed, agent, static_cast<std::uint64_t>(channel) + sub);
}

}  // namespace swa
