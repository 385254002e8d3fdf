#include <algorithm>
#include <cmath>
#include <limits>

#include "robent/experiments.hpp"

namespace robent {

namespace {

constexpr double kGridStep = 0.05;
constexpr int kGridPoints = 41;

SweepGrid sweep(const JointDistribution& mu, const GroundCost& cost, const std::vector<double>& grid,
                const SolverOptions& opts, bool parallel) {
  if (grid.empty() || grid.front() != 0.0 || !std::is_sorted(grid.begin(), grid.end())) {
    throw Error(ErrorKind::kValidation, "grid must be sorted and start at 0", "grid");
  }
  if (!cost.label_preserving()) {
    throw Error(ErrorKind::kValidation, "sweep needs a label-preserving cost",
                "cost.label_preserving");
  }
  opts.validate();
  const std::size_t n = grid.size();
  const auto spec_at = [&](double eps) {
    return ConstraintSpec{ConstraintKind::kExpectedDistortionChannel, eps, cost, mu};
  };
  for (double eps : grid) spec_at(eps).validate();

  SweepGrid out;
  out.epsilon_rule = grid;
  out.epsilon_attack = grid;
  out.clean_entropy = conditional_entropy(mu);
  out.label_entropy = entropy(marginal_y(mu));
  out.epsilon_sat = saturation_budget(mu, cost);
  out.h_star_curve.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.fw_gap.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.clean_loss.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.loss.assign(n * n, std::numeric_limits<double>::quiet_NaN());
  out.cell_error.assign(n * n, "");

  std::vector<DecisionRule> rules(n);
  std::vector<char> rule_ok(n, 0), rule_conv(n, 0), cell_ok(n * n, 0);
  std::vector<std::string> rule_error(n);
  const auto ni = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t r = 0; r < ni; ++r) {
    try {
      const ConstraintSpec spec = spec_at(grid[r]);
      const SolveReport solve = max_conditional_entropy(spec, opts);
      rules[r] = extract_rule(solve, spec).rule;
      out.h_star_curve[r] = solve.h_star;
      out.fw_gap[r] = solve.fw_gap;
      out.clean_loss[r] = cross_entropy_loss(mu, rules[r]);
      rule_conv[r] = solve.converged;
      rule_ok[r] = 1;
    } catch (const Error& e) {
      rule_error[r] = e.what();
    }
  }

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t cell = 0; cell < ni * ni; ++cell) {
    const std::size_t a = static_cast<std::size_t>(cell) / n, r = static_cast<std::size_t>(cell) % n;
    if (!rule_ok[r]) {
      out.cell_error[cell] = rule_error[r];
      continue;
    }
    try {
      const auto attack = attack_best_response(rules[r], spec_at(grid[a]), opts.gradient_clamp);
      out.loss[cell] = attack.loss;
      cell_ok[cell] = 1;
      if (attack.unbounded) out.cell_error[cell] = "unbounded loss, clamped";
    } catch (const Error& e) {
      out.cell_error[cell] = e.what();
    }
  }

  out.rule_converged.assign(rule_conv.begin(), rule_conv.end());
  out.cell_converged.resize(n * n);
  for (std::size_t cell = 0; cell < n * n; ++cell) {
    out.cell_converged[cell] = cell_ok[cell] && rule_conv[cell % n];
  }
  return out;
}

}  // namespace

double saturation_budget(const JointDistribution& mu, const GroundCost& cost) {
  if (!cost.label_preserving()) {
    throw Error(ErrorKind::kValidation, "saturation budget needs a label-preserving cost",
                "cost.label_preserving");
  }
  const std::size_t nx = mu.nx(), ny = mu.ny();
  double best = kInf;
  for (std::size_t z = 0; z < nx; ++z) {
    double total = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double m = mu(x, y);
        if (m > 0.0) total += m * cost(point_index(x, y, ny), point_index(z, y, ny));
      }
    }
    best = std::min(best, total);
  }
  return best;
}

std::vector<double> default_grid() {
  std::vector<double> grid(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) grid[i] = kGridStep * i;
  return grid;
}

SweepGrid run_tradeoff_sweep(const JointDistribution& mu, const GroundCost& cost,
                             const std::vector<double>& grid, const SolverOptions& opts) {
  return sweep(mu, cost, grid, opts, true);
}

SweepGrid run_tradeoff_sweep_serial(const JointDistribution& mu, const GroundCost& cost,
                                    const std::vector<double>& grid, const SolverOptions& opts) {
  return sweep(mu, cost, grid, opts, false);
}

}  // namespace robent
