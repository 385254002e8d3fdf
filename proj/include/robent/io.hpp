#pragma once

// Problem and report files, sweep CSV, SVG plots and the command line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robent/experiments.hpp"
#include "robent/game.hpp"
#include "robent/maxent.hpp"

namespace robent::io {

inline constexpr int kFormatVersion = 1;

struct ProblemFile {
  int version = kFormatVersion;
  std::size_t nx = 0;
  std::size_t ny = 0;
  bool mu_given = true;  // false when mu was drawn from `seed`
  JointDistribution mu;
  CostKind cost_kind = CostKind::kAbsoluteDifference;
  bool label_preserving = true;
  std::vector<double> cost_matrix;  // explicit costs only, +inf allowed
  GroundCost cost;
  ConstraintKind constraint_kind = ConstraintKind::kWassersteinBall;
  double epsilon = 0.0;
  SolverOptions options;
  std::optional<std::uint64_t> seed;

  ConstraintSpec spec() const { return {constraint_kind, epsilon, cost, mu}; }
};

// Throws kSyntax for malformed text and kValidation with a field path for
// schema or value errors. Unknown fields are rejected.
ProblemFile parse_problem(std::string_view text);
std::string write_problem(const ProblemFile& problem);

// Replaces the seed (and a seed-drawn mu) as the environment override does.
void apply_seed(ProblemFile& problem, std::uint64_t seed);

struct ReportFile {
  ProblemFile problem;
  double h_star = 0.0;
  double fw_gap = 0.0;
  int iterations = 0;
  double multiplier = 0.0;
  bool converged = false;
  JointDistribution nu_star;
  DecisionRule q_star;
  std::vector<bool> coverage;
  double minimax_upper = 0.0;
  double maximin_lower = 0.0;
  double saddle_gap = 0.0;
  bool unbounded = false;
  double wall_ms = 0.0;
};

ReportFile make_report(const ProblemFile& problem, const SaddleCertificate& cert, double wall_ms);
std::string write_report(const ReportFile& report);
// Parses and re-checks the report invariants; throws kValidation on any
// inconsistency.
ReportFile read_report(std::string_view text);

std::string write_sweep_csv(const SweepGrid& grid);

struct Plots {
  std::string by_rule;    // loss over epsilon_rule, one line per epsilon_attack
  std::string by_attack;  // loss over epsilon_attack, one line per epsilon_rule, h* dashed
};

Plots render_plots(const SweepGrid& grid);

std::string toy_report_json(const ToyReport& report);
std::string fixed_point_json(const FixedPointReport& report);
std::string counterexample_json(const std::vector<CounterexampleRow>& rows);
std::string deterministic_json(const DeterministicAttackReport& report);
std::string mechanism_json(const MechanismReport& report, double epsilon);

// Exit codes: 0 success, 1 validation or syntax, 2 non-convergence or
// numerical failure, 3 infeasibility.
int exit_code(ErrorKind kind);
int cli_main(int argc, char** argv);

}  // namespace robent::io
