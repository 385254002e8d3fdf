#pragma once

// Exact discrete optimal transport between distributions on X x Y and the
// budget-constrained linear maximization used by the Frank-Wolfe solvers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "robent/core.hpp"

namespace robent::transport {

struct Coupling {
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::vector<double> plan;  // sources * targets, row-major

  double operator()(std::size_t a, std::size_t b) const { return plan[a * targets + b]; }
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;
};

// phi(a) + psi(b) <= d(a, b) on finite pairs, tight on the plan support.
struct DualPotentials {
  std::vector<double> phi;
  std::vector<double> psi;
};

struct TransportResult {
  double value = 0.0;
  Coupling coupling;
  DualPotentials duals;
  // The positive-flow support does not connect every point with mass, so
  // the potentials are not unique up to one additive constant.
  bool degenerate_duals = false;
  std::size_t pivots = 0;
  bool perturbed = false;  // the supply-perturbation fallback was used
};

// Transportation problem with +inf costs allowed. Supplies and demands must
// balance within each block of points linked by finite costs.
TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                std::span<const double> cost);

TransportResult wasserstein_distance(const JointDistribution& mu, const JointDistribution& nu,
                                     const GroundCost& cost);

// |primal - dual| plus the largest dual-feasibility violation.
double verify_duality(const Coupling& coupling, const DualPotentials& duals,
                      std::span<const double> cost);
double verify_duality(const Coupling& coupling, const DualPotentials& duals,
                      const GroundCost& cost);

// Each source sends its mass to `target[a]`, except `split_source`, which
// sends `split_fraction` of its mass to `split_target` instead.
struct Routing {
  std::vector<std::uint32_t> target;
  std::int64_t split_source = -1;
  std::uint32_t split_target = 0;
  double split_fraction = 0.0;
};

struct RoutingResult {
  Routing routing;
  double multiplier = 0.0;
  double objective = 0.0;
  double achieved_distortion = 0.0;
  double dual_bound = 0.0;  // Lagrangian upper bound at `multiplier`
};

// max sum_a mass(a) * gain(target)  s.t. sum_a mass(a) * cost(a, target) <= epsilon.
RoutingResult route_with_budget(std::span<const double> source_mass, std::span<const double> cost,
                                std::span<const double> gain, double epsilon);

// Per-source argmax of gain over targets with cost <= radius. No multiplier.
RoutingResult route_within_radius(std::span<const double> source_mass,
                                  std::span<const double> cost, std::span<const double> gain,
                                  double radius);

Coupling to_coupling(const Routing& routing, std::span<const double> source_mass,
                     std::size_t targets);

struct OracleResult {
  Coupling coupling;
  double multiplier = 0.0;
  double objective = 0.0;
  double achieved_distortion = 0.0;
  double dual_bound = 0.0;
  Routing routing;
};

OracleResult constrained_linear_oracle(const JointDistribution& mu, const GroundCost& cost,
                                       double epsilon, std::span<const double> gain);

}  // namespace robent::transport
