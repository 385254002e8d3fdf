#pragma once

// Scenario runners: the five-letter toy game, the tradeoff sweep, the fixed
// point of the penalized problem, the privacy mechanism and the
// discontinuity counterexample.

#include <cstdint>
#include <string>
#include <vector>

#include "robent/core.hpp"
#include "robent/game.hpp"
#include "robent/maxent.hpp"

namespace robent {

struct ToyReport {
  double h_star = 0.0;
  double alpha_hat = 0.0;  // share of x = 2 routed to z = 1
  double det_maximin = 0.0;
  double det_minimax = 0.0;
  double saddle_gap = 0.0;
  double fw_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  DecisionRule rule;
};

// mu = 1/3 at (0,0), (2,2), (4,4) on a 5 x 5 alphabet, d = |x - z|, channel
// moves of at most 1.
JointDistribution toy_distribution();
GroundCost toy_cost();
ToyReport run_toy_example(const SolverOptions& opts = {});

struct SweepGrid {
  std::vector<double> epsilon_rule;
  std::vector<double> epsilon_attack;
  std::vector<double> loss;          // attack-major: loss[a * rules + r]
  std::vector<bool> cell_converged;  // rule solve converged and the cell evaluated
  std::vector<std::string> cell_error;
  std::vector<double> h_star_curve;
  std::vector<double> fw_gap;        // per rule solve
  std::vector<bool> rule_converged;
  std::vector<double> clean_loss;    // L(mu, q*_r)
  double clean_entropy = 0.0;
  double label_entropy = 0.0;
  double epsilon_sat = 0.0;

  double at(std::size_t attack, std::size_t rule) const {
    return loss[attack * epsilon_rule.size() + rule];
  }
};

// min_z E_mu[d(X, z)]: the budget at which Z can be made independent of Y.
double saturation_budget(const JointDistribution& mu, const GroundCost& cost);

std::vector<double> default_grid();  // 0, 0.05, ..., 2.0

SweepGrid run_tradeoff_sweep(const JointDistribution& mu, const GroundCost& cost,
                             const std::vector<double>& grid, const SolverOptions& opts = {});
SweepGrid run_tradeoff_sweep_serial(const JointDistribution& mu, const GroundCost& cost,
                                    const std::vector<double>& grid,
                                    const SolverOptions& opts = {});

// Draws a joint from the simplex with a 64-bit linear congruential generator:
// sorted uniforms give spacings, which are raised to `sharpness` and
// renormalized. Identical seeds give identical bits.
JointDistribution seeded_joint(std::size_t nx, std::size_t ny, std::uint64_t seed,
                               double sharpness = 3.0);

inline constexpr std::size_t kDefaultNx = 5;
inline constexpr std::size_t kDefaultNy = 5;
// Chosen so that H(Y) is in [1.5, 1.7] and H(Y|X) in [0.3, 0.4].
extern const std::uint64_t kDefaultSweepSeed;
JointDistribution default_sweep_distribution();
// Smallest seed >= start whose joint lands in the entropy windows.
std::uint64_t find_sweep_seed(std::uint64_t start, std::uint64_t limit = 1'000'000);

struct FixedPointReport {
  double lambda = 0.0;
  double residual_standard = 0.0;
  double residual_uniform_variant = 0.0;
  double constant_standard = 0.0;
  double constant_uniform_variant = 0.0;
  bool degenerate_duals = false;
  std::size_t support_size = 0;
  // W minus the dual value of the target potential and its c-transform;
  // zero exactly when the target is itself a Kantorovich potential.
  double potential_gap_standard = 0.0;
  double potential_gap_uniform_variant = 0.0;
  double transport_value = 0.0;
  double entropy = 0.0;
  double fw_gap = 0.0;
  bool converged = false;
  JointDistribution nu;
};

// Residuals of phi against -lambda ln nu(y|x) and against
// -lambda (ln nu(x,y) - ln nu(x) / ny), each after the best constant shift.
FixedPointReport fixed_point_residuals(const JointDistribution& nu, const JointDistribution& mu,
                                       const GroundCost& cost, double lambda);
FixedPointReport run_fixed_point(const JointDistribution& mu, const GroundCost& cost,
                                 double lambda, const SolverOptions& opts = {});

struct MechanismReport {
  Channel channel;
  double leakage = 0.0;  // H(Y) - h_star
  double mutual_information = 0.0;  // I(Y; Z) of the pushed-forward joint
  double distortion = 0.0;
  double h_star = 0.0;
  double fw_gap = 0.0;
  bool converged = false;
};

MechanismReport design_privacy_mechanism(const JointDistribution& mu, const GroundCost& cost,
                                         double epsilon, const SolverOptions& opts = {});

struct CounterexampleRow {
  std::uint64_t n = 0;
  double q_n_x0 = 0.0;  // q_n(1 | 0)
  double q_n_x1 = 0.0;
  double q_prime_x0 = 0.0;
  double q_prime_x1 = 0.0;
  double tv_p = 0.0;  // total variation of p_n to p_0
  double tv_p_prime = 0.0;
};

// p_n and p'_n on {0,1}^2 both converge to p_0 while their posteriors at
// x = 1 stay at 1 and 0.
JointDistribution counterexample_p(std::uint64_t n);
JointDistribution counterexample_p_prime(std::uint64_t n);
std::vector<CounterexampleRow> run_counterexample(const std::vector<std::uint64_t>& n_values);

}  // namespace robent
