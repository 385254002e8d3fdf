#include "robent/maxent.hpp"

#include <algorithm>
#include <cmath>

#include "frank_wolfe.hpp"

namespace robent {

namespace {

constexpr double kRadiusSlack = 1e-12;
constexpr double kStartShare = 0.5;

bool allowed(const ConstraintSpec& spec, double c) {
  if (!std::isfinite(c)) return false;
  if (spec.kind == ConstraintKind::kMaxDistortionChannel) {
    return c <= spec.epsilon + kRadiusSlack * (1.0 + spec.epsilon);
  }
  return true;
}

Channel channel_from_coupling(const JointDistribution& mu, const transport::Coupling& plan) {
  const std::size_t nx = mu.nx(), ny = mu.ny();
  std::vector<double> cond(nx * ny * nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t a = point_index(x, y, ny);
      double* slice = &cond[a * nx];
      const double m = mu.at(a);
      if (m > kSupportThreshold) {
        double total = 0.0;
        for (std::size_t z = 0; z < nx; ++z) {
          slice[z] = std::max(0.0, plan(a, point_index(z, y, ny)));
          total += slice[z];
        }
        for (std::size_t z = 0; z < nx; ++z) slice[z] /= total;
      } else {
        for (std::size_t z = 0; z < nx; ++z) slice[z] = 1.0 / static_cast<double>(nx);
      }
    }
  }
  return Channel(nx, ny, nx, std::move(cond));
}

}  // namespace

const char* constraint_kind_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kWassersteinBall: return "wasserstein_ball";
    case ConstraintKind::kExpectedDistortionChannel: return "expected_distortion_channel";
    case ConstraintKind::kMaxDistortionChannel: return "max_distortion_channel";
  }
  return "?";
}

ConstraintKind parse_constraint_kind(const std::string& name) {
  if (name == "wasserstein_ball") return ConstraintKind::kWassersteinBall;
  if (name == "expected_distortion_channel") return ConstraintKind::kExpectedDistortionChannel;
  if (name == "max_distortion_channel") return ConstraintKind::kMaxDistortionChannel;
  throw Error(ErrorKind::kValidation, "unknown constraint kind '" + name + "'", "constraint.kind");
}

void ConstraintSpec::validate() const {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorKind::kValidation, "epsilon must be finite and >= 0", "constraint.epsilon");
  }
  if (reference.points() == 0) {
    throw Error(ErrorKind::kValidation, "reference distribution is empty", "mu");
  }
  if (cost.nx() != reference.nx() || cost.ny() != reference.ny()) {
    throw Error(ErrorKind::kValidation, "cost alphabet does not match mu", "cost");
  }
  if (channel_kind() && !cost.label_preserving()) {
    throw Error(ErrorKind::kValidation, "channel constraints need a label-preserving cost",
                "cost.label_preserving");
  }
}

void SolverOptions::validate() const {
  if (max_iterations < 0) {
    throw Error(ErrorKind::kValidation, "max_iterations must be >= 0", "options.max_iterations");
  }
  if (!(fw_gap_tolerance > 0.0)) {
    throw Error(ErrorKind::kValidation, "fw_gap_tolerance must be > 0", "options.fw_gap_tolerance");
  }
  if (!(gradient_clamp > 0.0) || gradient_clamp > 1e-3) {
    throw Error(ErrorKind::kValidation, "gradient_clamp must lie in (0, 1e-3]",
                "options.gradient_clamp");
  }
}

std::vector<double> entropy_gradient(const JointDistribution& nu, double delta) {
  if (!(delta > 0.0) || delta > 1e-3) {
    throw Error(ErrorKind::kValidation, "delta must lie in (0, 1e-3]", "delta");
  }
  const auto px = marginal_x(nu);
  std::vector<double> g(nu.points());
  for (std::size_t x = 0; x < nu.nx(); ++x) {
    for (std::size_t y = 0; y < nu.ny(); ++y) {
      double& out = g[point_index(x, y, nu.ny())];
      if (px[x] <= 0.0) {
        out = -std::log(delta);
        continue;
      }
      out = -std::log(std::max(nu(x, y), delta * px[x]) / std::max(px[x], delta));
    }
  }
  return g;
}

transport::OracleResult constraint_oracle(const ConstraintSpec& spec, std::span<const double> gain) {
  if (spec.kind != ConstraintKind::kMaxDistortionChannel) {
    return transport::constrained_linear_oracle(spec.reference, spec.cost, spec.epsilon, gain);
  }
  const auto mass = spec.reference.mass();
  auto r = transport::route_within_radius(mass, spec.cost.pairs(), gain, spec.epsilon);
  transport::OracleResult out;
  out.coupling = transport::to_coupling(r.routing, mass, spec.reference.points());
  out.objective = r.objective;
  out.achieved_distortion = r.achieved_distortion;
  out.dual_bound = r.dual_bound;
  out.routing = std::move(r.routing);
  return out;
}

SolveReport max_conditional_entropy(const ConstraintSpec& spec, const SolverOptions& opts) {
  spec.validate();
  opts.validate();
  const JointDistribution& mu = spec.reference;
  const std::size_t points = mu.points();
  const auto mass = mu.mass();
  const auto cost = spec.cost.pairs();

  // Feasible start: the identity mixed with a spread of every source over
  // its admissible targets, scaled to use at most half of the budget.
  detail::Vertex identity, spread;
  double spread_cost = 0.0;
  for (std::size_t a = 0; a < points; ++a) {
    if (mass[a] <= 0.0) continue;
    const auto src = static_cast<std::uint32_t>(a);
    identity.cells.push_back({src, src, mass[a]});
    std::vector<std::uint32_t> targets;
    for (std::size_t b = 0; b < points; ++b) {
      if (allowed(spec, cost[a * points + b])) targets.push_back(static_cast<std::uint32_t>(b));
    }
    const double share = mass[a] / static_cast<double>(targets.size());
    for (std::uint32_t b : targets) {
      spread.cells.push_back({src, b, share});
      spread_cost += share * cost[a * points + b];
    }
  }
  double tau = kStartShare;
  if (spec.kind != ConstraintKind::kMaxDistortionChannel && spread_cost > 0.0) {
    tau = std::min(kStartShare, kStartShare * spec.epsilon / spread_cost);
  }

  detail::FwProblem problem;
  problem.nx = mu.nx();
  problem.ny = mu.ny();
  problem.sources = points;
  problem.cost = cost;
  problem.kappa = 0.0;
  // One atom: the spread alone may break the budget.
  detail::Vertex start;
  for (const auto& c : identity.cells) start.cells.push_back({c.source, c.target, (1.0 - tau) * c.mass});
  for (const auto& c : spread.cells) {
    if (tau > 0.0) start.cells.push_back({c.source, c.target, tau * c.mass});
  }
  problem.start = {std::move(start)};
  problem.start_weights = {1.0};
  const Posterior clean = posterior(mu);
  problem.empty_row_rule.assign(clean.rule.values().begin(), clean.rule.values().end());
  problem.oracle = [&spec, mass](std::span<const double> gain) {
    const auto r = constraint_oracle(spec, gain);
    detail::Vertex v = detail::routing_vertex(r.routing, mass);
    v.multiplier = r.multiplier;
    return v;
  };

  const detail::FwResult fw = detail::run_frank_wolfe(problem, opts);

  SolveReport report;
  report.nu_star = JointDistribution::normalized(mu.nx(), mu.ny(), fw.nu);
  report.h_star = conditional_entropy(report.nu_star);
  report.coupling.sources = points;
  report.coupling.targets = points;
  report.coupling.plan = fw.coupling;
  if (spec.channel_kind()) report.channel = channel_from_coupling(mu, report.coupling);
  report.fw_gap = fw.gap;
  report.iterations = fw.iterations;
  report.multiplier = fw.multiplier;
  report.converged = fw.converged;
  report.trace = fw.trace;
  std::vector<double> rule(points);
  for (std::size_t x = 0; x < mu.nx(); ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < mu.ny(); ++y) row += fw.nu[x * mu.ny() + y];
    for (std::size_t y = 0; y < mu.ny(); ++y) {
      const std::size_t i = x * mu.ny() + y;
      rule[i] = row > 0.0 ? fw.nu[i] / row : fw.rule[i];
    }
  }
  report.certificate_rule = DecisionRule(mu.nx(), mu.ny(), std::move(rule));
  return report;
}

}  // namespace robent
