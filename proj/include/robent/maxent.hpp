#pragma once

// Maximum conditional entropy over convex sets of perturbed distributions,
// and the entropy-penalized transport problem.

#include <cstdint>
#include <optional>
#include <vector>

#include "robent/core.hpp"
#include "robent/transport.hpp"

namespace robent {

enum class ConstraintKind { kWassersteinBall, kExpectedDistortionChannel, kMaxDistortionChannel };

const char* constraint_kind_name(ConstraintKind kind);
ConstraintKind parse_constraint_kind(const std::string& name);

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::kWassersteinBall;
  double epsilon = 0.0;
  GroundCost cost;
  JointDistribution reference;

  // Throws kValidation naming the offending field.
  void validate() const;
  bool channel_kind() const { return kind != ConstraintKind::kWassersteinBall; }
};

enum class LineSearch { kHarmonic, kGolden };

struct SolverOptions {
  int max_iterations = 5000;
  double fw_gap_tolerance = 1e-7;
  double gradient_clamp = 1e-12;
  LineSearch line_search = LineSearch::kGolden;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SolveReport {
  double h_star = 0.0;
  JointDistribution nu_star;
  std::optional<Channel> channel;
  transport::Coupling coupling;  // mu points -> nu points
  double fw_gap = 0.0;
  int iterations = 0;
  double multiplier = 0.0;
  bool converged = false;
  std::vector<double> trace;  // objective before each iteration
  // The rule whose -ln is the gradient behind fw_gap: the posterior of
  // nu_star on rows with mass; on empty rows it starts as the clean
  // posterior of the reference (uniform off its support) and is refit
  // only when the oracle routes mass there.
  DecisionRule certificate_rule;
};

// -ln of the clamped posterior: max(nu(x,y), d*nu(x)) / max(nu(x), d).
// Rows with nu(x) = 0 get ln(1/d).
std::vector<double> entropy_gradient(const JointDistribution& nu, double delta);

SolveReport max_conditional_entropy(const ConstraintSpec& spec, const SolverOptions& opts = {});

// Linear maximization of sum nu * gain over the constraint set; shared with
// the attack best response.
transport::OracleResult constraint_oracle(const ConstraintSpec& spec, std::span<const double> gain);

struct PenalizedResult {
  JointDistribution nu;
  double transport_value = 0.0;
  double entropy = 0.0;
  double objective = 0.0;  // transport_value - lambda * entropy
  double fw_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate_duals = false;
};

// argmin over all joints nu of W_d(nu, mu) - lambda * H_nu(Y|X).
PenalizedResult penalized_solve(const JointDistribution& mu, const GroundCost& cost, double lambda,
                                const SolverOptions& opts = {});

}  // namespace robent
