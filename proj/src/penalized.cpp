#include <cmath>

#include "frank_wolfe.hpp"
#include "robent/maxent.hpp"

namespace robent {

// Works on the coupling gamma between nu (rows of the cost) and mu: the
// mu side is fixed, nu is the free marginal, and W_d(nu, mu) <= <gamma, d>
// with equality at the optimum. Dividing by lambda turns the problem into
// maximizing H(nu) - <gamma, d> / lambda.
PenalizedResult penalized_solve(const JointDistribution& mu, const GroundCost& cost, double lambda,
                                const SolverOptions& opts) {
  opts.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::kValidation, "lambda must be finite and > 0", "lambda");
  }
  if (cost.nx() != mu.nx() || cost.ny() != mu.ny()) {
    throw Error(ErrorKind::kValidation, "cost alphabet does not match mu", "cost");
  }
  const std::size_t points = mu.points();
  const auto mass = mu.mass();

  // Engine sources are mu points, engine targets are nu points.
  std::vector<double> flipped(points * points);
  for (std::size_t a = 0; a < points; ++a) {
    for (std::size_t b = 0; b < points; ++b) flipped[b * points + a] = cost(a, b);
  }
  const double kappa = 1.0 / lambda;

  detail::Vertex identity, spread;
  for (std::size_t b = 0; b < points; ++b) {
    if (mass[b] <= 0.0) continue;
    const auto src = static_cast<std::uint32_t>(b);
    identity.cells.push_back({src, src, mass[b]});
    std::vector<std::uint32_t> targets;
    for (std::size_t a = 0; a < points; ++a) {
      if (std::isfinite(flipped[b * points + a])) targets.push_back(static_cast<std::uint32_t>(a));
    }
    for (std::uint32_t a : targets) {
      spread.cells.push_back({src, a, mass[b] / static_cast<double>(targets.size())});
    }
  }

  detail::FwProblem problem;
  problem.nx = mu.nx();
  problem.ny = mu.ny();
  problem.sources = points;
  problem.cost = flipped;
  problem.kappa = kappa;
  problem.start = {identity, spread};
  problem.start_weights = {0.5, 0.5};
  problem.empty_row_rule.assign(points, 1.0 / static_cast<double>(mu.ny()));
  problem.oracle = [&](std::span<const double> gain) {
    detail::Vertex v;
    for (std::size_t b = 0; b < points; ++b) {
      if (mass[b] <= 0.0) continue;
      std::size_t pick = points;
      double best = -kInf;
      for (std::size_t a = 0; a < points; ++a) {
        const double c = flipped[b * points + a];
        if (!std::isfinite(c)) continue;
        const double value = gain[a] - kappa * c;
        if (pick == points) {
          best = value;
          pick = a;
          continue;
        }
        const double tie = 1e-13 * (1.0 + std::abs(best));
        if (value > best + tie || (value >= best - tie && c < flipped[b * points + pick])) {
          best = value;
          pick = a;
        }
      }
      v.cells.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(pick), mass[b]});
    }
    return v;
  };

  SolverOptions inner = opts;
  inner.fw_gap_tolerance = opts.fw_gap_tolerance / lambda;
  const detail::FwResult fw = detail::run_frank_wolfe(problem, inner);

  PenalizedResult out;
  out.nu = JointDistribution::normalized(mu.nx(), mu.ny(), fw.nu);
  const auto w = transport::wasserstein_distance(out.nu, mu, cost);
  out.transport_value = w.value;
  out.degenerate_duals = w.degenerate_duals;
  out.entropy = conditional_entropy(out.nu);
  out.objective = out.transport_value - lambda * out.entropy;
  out.fw_gap = lambda * fw.gap;
  out.iterations = fw.iterations;
  out.converged = fw.converged;
  return out;
}

}  // namespace robent
