#pragma once

// The classifier/adversary game: robust rule extraction, best responses,
// saddle-point certificates and the deterministic-attack values.

#include <cstdint>
#include <vector>

#include "robent/core.hpp"
#include "robent/maxent.hpp"

namespace robent {

struct ExtractedRule {
  DecisionRule rule;
  std::vector<bool> covered;  // x pinned by the maximizer
};

// Mass threshold on nu*(x) for a row to count as covered.
inline constexpr double kCoverageThreshold = 1e-9;

// Posterior of nu* on covered rows. Elsewhere the solver's certificate
// rule, which is the clean posterior of the reference (uniform off its
// support) unless the solve had to refit it; without one, that fallback.
ExtractedRule extract_rule(const SolveReport& report, const ConstraintSpec& spec);

struct AttackResult {
  JointDistribution nu;
  double loss = 0.0;       // with -ln q clamped at ln(1/delta)
  bool unbounded = false;  // nu puts mass where q(y|x) = 0
};

AttackResult attack_best_response(const DecisionRule& q, const ConstraintSpec& spec,
                                  double delta = 1e-12);

struct SaddleCertificate {
  double minimax_upper = 0.0;
  double maximin_lower = 0.0;
  double gap = 0.0;
  double fw_gap = 0.0;
  bool converged = false;
  bool unbounded = false;
  double clean_loss = 0.0;  // L(mu, q*)
  SolveReport solve;
  ExtractedRule rule;
  AttackResult attack;
};

SaddleCertificate saddle_gap(const ConstraintSpec& spec, const SolverOptions& opts = {});

struct DeterministicAttackReport {
  double maximin_value = 0.0;
  double minimax_value = 0.0;
  double stochastic_value = 0.0;
};

// Products of ball sizes above this are refused with kTooLarge.
inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

// max over maps g(x, y) into cost balls of radius epsilon of H(Y|Z).
double deterministic_maximin(const JointDistribution& mu, const GroundCost& cost, double epsilon);
double deterministic_maximin_serial(const JointDistribution& mu, const GroundCost& cost,
                                    double epsilon);

struct MinimaxOptions {
  int iterations = 20000;
  double step = 0.1;
  double delta = 1e-12;
};

// min over rules q of E_mu[max over the ball of -ln q], by projected
// subgradient descent.
double deterministic_minimax(const JointDistribution& mu, const GroundCost& cost, double epsilon,
                             const MinimaxOptions& opts = {});

// Both deterministic values plus h_star under the max-distortion channel.
DeterministicAttackReport deterministic_attack(const JointDistribution& mu, const GroundCost& cost,
                                               double epsilon, const SolverOptions& opts = {});

}  // namespace robent
