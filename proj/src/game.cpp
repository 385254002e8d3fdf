#include "robent/game.hpp"

#include <algorithm>
#include <cmath>

namespace robent {

ExtractedRule extract_rule(const SolveReport& report, const ConstraintSpec& spec) {
  const JointDistribution& nu = report.nu_star;
  const std::size_t nx = nu.nx(), ny = nu.ny();
  const auto px = marginal_x(nu);
  const Posterior clean = posterior(spec.reference);
  const bool certified = report.certificate_rule.nx() == nx && report.certificate_rule.ny() == ny;
  std::vector<double> cond(nx * ny);
  std::vector<bool> covered(nx, false);
  for (std::size_t x = 0; x < nx; ++x) {
    double* row = &cond[x * ny];
    if (px[x] > kCoverageThreshold) {
      covered[x] = true;
      for (std::size_t y = 0; y < ny; ++y) row[y] = nu(x, y) / px[x];
      continue;
    }
    const auto fallback = certified ? report.certificate_rule.row(x) : clean.rule.row(x);
    std::copy(fallback.begin(), fallback.end(), row);
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (!covered[x]) continue;
    double total = 0.0;
    for (std::size_t y = 0; y < ny; ++y) total += cond[x * ny + y];
    for (std::size_t y = 0; y < ny; ++y) cond[x * ny + y] /= total;
  }
  return {DecisionRule(nx, ny, std::move(cond)), std::move(covered)};
}

AttackResult attack_best_response(const DecisionRule& q, const ConstraintSpec& spec, double delta) {
  spec.validate();
  if (!(delta > 0.0) || delta > 1e-3) {
    throw Error(ErrorKind::kValidation, "delta must lie in (0, 1e-3]", "delta");
  }
  const JointDistribution& mu = spec.reference;
  if (q.nx() != mu.nx() || q.ny() != mu.ny()) {
    throw Error(ErrorKind::kValidation, "rule alphabet does not match mu", "q");
  }
  const std::size_t points = mu.points();
  std::vector<double> gain(points);
  for (std::size_t a = 0; a < points; ++a) gain[a] = -std::log(std::max(q.values()[a], delta));

  const auto r = constraint_oracle(spec, gain);
  std::vector<double> nu(points, 0.0);
  for (std::size_t a = 0; a < points; ++a) {
    for (std::size_t b = 0; b < points; ++b) nu[b] += r.coupling(a, b);
  }
  AttackResult out;
  out.nu = JointDistribution::normalized(mu.nx(), mu.ny(), std::move(nu));
  for (std::size_t b = 0; b < points; ++b) {
    const double m = out.nu.at(b);
    out.loss += m * gain[b];
    if (m > kSupportThreshold && q.values()[b] <= 0.0) out.unbounded = true;
  }
  return out;
}

SaddleCertificate saddle_gap(const ConstraintSpec& spec, const SolverOptions& opts) {
  SaddleCertificate cert;
  cert.solve = max_conditional_entropy(spec, opts);
  cert.rule = extract_rule(cert.solve, spec);
  cert.attack = attack_best_response(cert.rule.rule, spec, opts.gradient_clamp);
  cert.maximin_lower = cert.solve.h_star;
  cert.minimax_upper = cert.attack.loss;
  cert.gap = cert.minimax_upper - cert.maximin_lower;
  cert.fw_gap = cert.solve.fw_gap;
  cert.converged = cert.solve.converged;
  cert.unbounded = cert.attack.unbounded;
  cert.clean_loss = cross_entropy_loss(spec.reference, cert.rule.rule);
  return cert;
}

DeterministicAttackReport deterministic_attack(const JointDistribution& mu, const GroundCost& cost,
                                               double epsilon, const SolverOptions& opts) {
  DeterministicAttackReport out;
  out.maximin_value = deterministic_maximin(mu, cost, epsilon);
  MinimaxOptions mm;
  mm.delta = opts.gradient_clamp;
  out.minimax_value = deterministic_minimax(mu, cost, epsilon, mm);
  ConstraintSpec spec{ConstraintKind::kMaxDistortionChannel, epsilon, cost, mu};
  out.stochastic_value = max_conditional_entropy(spec, opts).h_star;
  return out;
}

}  // namespace robent
