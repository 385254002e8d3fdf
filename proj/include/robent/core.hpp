#pragma once

// Finite-alphabet probability objects and information measures. All
// logarithms are natural (nats), and 0 * ln 0 is taken as 0.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "robent/error.hpp"

namespace robent {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute tolerance on probability sums at construction.
inline constexpr double kMassTolerance = 1e-12;

// Mass below this is treated as absent when forming posteriors.
inline constexpr double kSupportThreshold = 1e-12;

// Points of X x Y are flattened row-major: index = x * ny + y.
constexpr std::size_t point_index(std::size_t x, std::size_t y, std::size_t ny) {
  return x * ny + y;
}

class JointDistribution {
 public:
  JointDistribution() = default;  // empty 0 x 0 placeholder
  // Rejects negative or non-finite entries and totals off 1 by more than
  // kMassTolerance. Nothing is renormalized.
  JointDistribution(std::size_t nx, std::size_t ny, std::vector<double> mass);

  // For computed iterates: clamps tiny negatives to zero and divides by the
  // total. Still rejects totals that are far from 1.
  static JointDistribution normalized(std::size_t nx, std::size_t ny,
                                      std::vector<double> mass);
  static JointDistribution uniform(std::size_t nx, std::size_t ny);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t points() const noexcept { return mass_.size(); }

  double operator()(std::size_t x, std::size_t y) const {
    return mass_[point_index(x, y, ny_)];
  }
  double at(std::size_t point) const { return mass_[point]; }
  std::span<const double> mass() const noexcept { return mass_; }

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> mass_;
};

// q(y|x); each row is a distribution over Y.
class DecisionRule {
 public:
  DecisionRule() = default;  // empty 0 x 0 placeholder
  DecisionRule(std::size_t nx, std::size_t ny, std::vector<double> cond);
  static DecisionRule uniform(std::size_t nx, std::size_t ny);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double operator()(std::size_t y, std::size_t x) const {
    return cond_[point_index(x, y, ny_)];
  }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(cond_).subspan(x * ny_, ny_);
  }
  std::span<const double> values() const noexcept { return cond_; }

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> cond_;
};

// P(z | x, y), stored as ((x * ny + y) * nz + z).
class Channel {
 public:
  Channel() = default;  // empty placeholder
  Channel(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<double> cond);
  static Channel identity(std::size_t nx, std::size_t ny);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t nz() const noexcept { return nz_; }
  double operator()(std::size_t z, std::size_t x, std::size_t y) const {
    return cond_[point_index(x, y, ny_) * nz_ + z];
  }
  std::span<const double> values() const noexcept { return cond_; }

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::size_t nz_ = 0;
  std::vector<double> cond_;
};

enum class CostKind { kExplicit, kAbsoluteDifference, kSquaredDifference, kHamming };

const char* cost_kind_name(CostKind kind);
CostKind parse_cost_kind(const std::string& name);

// Cost on pairs of (x, y) points. Label-preserving costs are +inf whenever
// the labels differ and equal the base cost d(x, x') otherwise. Without the
// label-preserving flag the built-in kinds act coordinate-wise:
// d(x, x') + d(y, y').
class GroundCost {
 public:
  GroundCost() = default;
  // Built-in kinds.
  static GroundCost make(CostKind kind, std::size_t nx, std::size_t ny, bool label_preserving);
  // Explicit base cost over X x X (nx * nx entries), label-preserving.
  static GroundCost explicit_base(std::size_t nx, std::size_t ny, std::vector<double> base);
  // Explicit cost over pairs of points ((nx*ny)^2 entries), +inf allowed.
  static GroundCost explicit_pairs(std::size_t nx, std::size_t ny, std::vector<double> pairs);

  CostKind kind() const noexcept { return kind_; }
  bool label_preserving() const noexcept { return label_preserving_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t points() const noexcept { return nx_ * ny_; }

  double operator()(std::size_t a, std::size_t b) const { return pairs_[a * points() + b]; }
  std::span<const double> pairs() const noexcept { return pairs_; }

  // d(x, z) over X; throws kValidation for explicit pair costs.
  bool has_base() const noexcept { return !base_.empty(); }
  double base(std::size_t x, std::size_t z) const;
  std::span<const double> base_matrix() const noexcept { return base_; }

  double max_finite() const noexcept { return max_finite_; }

 private:
  void finish();

  CostKind kind_ = CostKind::kExplicit;
  bool label_preserving_ = false;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> base_;
  std::vector<double> pairs_;
  double max_finite_ = 0.0;
};

enum class ZeroMassPolicy { kUniform, kFlagged };

struct Posterior {
  DecisionRule rule;
  std::vector<bool> covered;  // x with marginal above kSupportThreshold
};

std::vector<double> marginal_x(const JointDistribution& p);
std::vector<double> marginal_y(const JointDistribution& p);

// Rows of uncovered x are uniform under both policies; `flagged` is for
// callers that promise to consult `covered` before using those rows.
Posterior posterior(const JointDistribution& p, ZeroMassPolicy policy = ZeroMassPolicy::kUniform);

double entropy(std::span<const double> dist);
double conditional_entropy(const JointDistribution& p);
double cross_entropy_loss(const JointDistribution& p, const DecisionRule& q);
JointDistribution push_forward(const JointDistribution& mu, const Channel& k);
double expected_distortion(const JointDistribution& mu, const Channel& k, const GroundCost& cost);
// I(Y; Z) for a joint laid out over Z x Y.
double mutual_information_yz(const JointDistribution& zy);

namespace kernels {

// Same measures on raw row-major mass, no validation. Used inside solvers.
double conditional_entropy(std::span<const double> mass, std::size_t nx, std::size_t ny);

}  // namespace kernels

}  // namespace robent
