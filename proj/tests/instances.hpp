#pragma once

// Seeded random problem instances shared by the unit and acceptance tests.

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "robent/core.hpp"
#include "robent/maxent.hpp"

namespace testing {

inline robent::JointDistribution random_joint(oracle::Rng& rng, std::size_t nx, std::size_t ny,
                                              double zero_share = 0.0) {
  return robent::JointDistribution::normalized(nx, ny, oracle::random_simplex(rng, nx * ny, zero_share));
}

inline robent::GroundCost random_builtin_cost(oracle::Rng& rng, std::size_t nx, std::size_t ny,
                                              bool label_preserving) {
  static constexpr robent::CostKind kKinds[] = {robent::CostKind::kAbsoluteDifference,
                                                robent::CostKind::kSquaredDifference,
                                                robent::CostKind::kHamming};
  return robent::GroundCost::make(kKinds[rng.below(3)], nx, ny, label_preserving);
}

// Symmetric pair cost with zero diagonal; every entry finite.
inline robent::GroundCost random_finite_pairs(oracle::Rng& rng, std::size_t nx, std::size_t ny) {
  const std::size_t n = nx * ny;
  std::vector<double> c(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) c[a * n + b] = c[b * n + a] = 0.2 + rng.uniform();
  }
  return robent::GroundCost::explicit_pairs(nx, ny, std::move(c));
}

struct GameInstance {
  robent::ConstraintSpec spec;
  std::uint64_t seed = 0;
};

// nx, ny in 2..6, Wasserstein or expected-distortion, epsilon in {0.1, 0.5, 1}.
inline GameInstance random_game(std::uint64_t seed) {
  oracle::Rng rng(seed);
  const std::size_t nx = 2 + rng.below(5), ny = 2 + rng.below(5);
  static constexpr double kEps[] = {0.1, 0.5, 1.0};
  GameInstance g;
  g.seed = seed;
  g.spec.kind = seed % 2 == 0 ? robent::ConstraintKind::kWassersteinBall
                              : robent::ConstraintKind::kExpectedDistortionChannel;
  g.spec.epsilon = kEps[rng.below(3)];
  const bool preserving = !g.spec.channel_kind() ? rng.uniform() < 0.7 : true;
  g.spec.cost = random_builtin_cost(rng, nx, ny, preserving);
  g.spec.reference = random_joint(rng, nx, ny, 0.2);
  return g;
}

}  // namespace testing
