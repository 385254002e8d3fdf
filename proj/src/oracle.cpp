#include <algorithm>
#include <cmath>
#include <string>

#include "robent/transport.hpp"

namespace robent::transport {

namespace {

constexpr double kTieTolerance = 1e-13;
constexpr double kRelativeBracket = 1e-12;
constexpr int kMaxBisections = 400;
constexpr double kRadiusSlack = 1e-12;

struct Candidate {
  std::uint32_t target;
  double cost;
};

class Router {
 public:
  Router(std::span<const double> mass, std::span<const double> cost, std::span<const double> gain)
      : mass_(mass), gain_(gain), candidates_(mass.size()) {
    const std::size_t n = gain.size();
    if (cost.size() != mass.size() * n) {
      throw Error(ErrorKind::kValidation, "oracle: cost matrix has wrong size", "cost");
    }
    for (std::size_t a = 0; a < mass.size(); ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const double c = cost[a * n + b];
        if (std::isfinite(c) && std::isfinite(gain[b])) {
          candidates_[a].push_back({static_cast<std::uint32_t>(b), c});
        }
      }
      if (candidates_[a].empty()) {
        throw Error(ErrorKind::kEmptyFeasible,
                    "oracle: source point " + std::to_string(a) + " has no finite-cost target");
      }
    }
  }

  std::size_t sources() const { return mass_.size(); }
  const std::vector<Candidate>& candidates(std::size_t a) const { return candidates_[a]; }
  double gain(std::size_t b) const { return gain_[b]; }
  double mass(std::size_t a) const { return mass_[a]; }

  // Index into candidates(a) of the Lagrangian argmax at price lambda.
  std::size_t best(std::size_t a, double lambda) const {
    const auto& cands = candidates_[a];
    std::size_t pick = 0;
    double pick_value = gain_[cands[0].target] - lambda * cands[0].cost;
    for (std::size_t k = 1; k < cands.size(); ++k) {
      const double value = gain_[cands[k].target] - lambda * cands[k].cost;
      const double tie = kTieTolerance * (1.0 + std::abs(pick_value));
      if (value > pick_value + tie) {
        pick = k;
        pick_value = value;
      } else if (value >= pick_value - tie && cands[k].cost < cands[pick].cost) {
        pick = k;
        pick_value = value;
      }
    }
    return pick;
  }

  std::vector<std::size_t> select(double lambda) const {
    std::vector<std::size_t> out(sources());
    for (std::size_t a = 0; a < sources(); ++a) out[a] = best(a, lambda);
    return out;
  }

  double distortion(const std::vector<std::size_t>& sel) const {
    double total = 0.0;
    for (std::size_t a = 0; a < sources(); ++a) {
      if (mass_[a] > 0.0) total += mass_[a] * candidates_[a][sel[a]].cost;
    }
    return total;
  }

  double lagrangian_max(double lambda) const {
    double total = 0.0;
    for (std::size_t a = 0; a < sources(); ++a) {
      if (mass_[a] <= 0.0) continue;
      const Candidate& c = candidates_[a][best(a, lambda)];
      total += mass_[a] * (gain_[c.target] - lambda * c.cost);
    }
    return total;
  }

  Routing routing(const std::vector<std::size_t>& sel) const {
    Routing r;
    r.target.resize(sources());
    for (std::size_t a = 0; a < sources(); ++a) r.target[a] = candidates_[a][sel[a]].target;
    return r;
  }

 private:
  std::span<const double> mass_;
  std::span<const double> gain_;
  std::vector<std::vector<Candidate>> candidates_;
};

void evaluate(const Router& router, std::span<const double> cost, std::size_t targets,
              RoutingResult& result) {
  const Routing& r = result.routing;
  double objective = 0.0;
  double distortion = 0.0;
  for (std::size_t a = 0; a < router.sources(); ++a) {
    const double m = router.mass(a);
    if (m <= 0.0) continue;
    double keep = m;
    if (r.split_source == static_cast<std::int64_t>(a)) {
      const double moved = m * r.split_fraction;
      keep = m - moved;
      objective += moved * router.gain(r.split_target);
      distortion += moved * cost[a * targets + r.split_target];
    }
    objective += keep * router.gain(r.target[a]);
    distortion += keep * cost[a * targets + r.target[a]];
  }
  result.objective = objective;
  result.achieved_distortion = distortion;
}

}  // namespace

RoutingResult route_with_budget(std::span<const double> source_mass, std::span<const double> cost,
                                std::span<const double> gain, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::kValidation, "oracle: epsilon must be finite and >= 0", "epsilon");
  }
  const Router router(source_mass, cost, gain);
  const std::size_t targets = gain.size();
  RoutingResult result;

  const auto free_choice = router.select(0.0);
  if (router.distortion(free_choice) <= epsilon) {
    result.routing = router.routing(free_choice);
    result.multiplier = 0.0;
    evaluate(router, cost, targets, result);
    result.dual_bound = router.lagrangian_max(0.0);
    return result;
  }

  double gain_min = kInf, gain_max = -kInf, min_positive_cost = kInf;
  for (std::size_t a = 0; a < router.sources(); ++a) {
    for (const Candidate& c : router.candidates(a)) {
      gain_min = std::min(gain_min, router.gain(c.target));
      gain_max = std::max(gain_max, router.gain(c.target));
      if (c.cost > 0.0) min_positive_cost = std::min(min_positive_cost, c.cost);
    }
  }
  double lo = 0.0;
  double hi = (gain_max - gain_min) / min_positive_cost + 1.0;
  if (router.distortion(router.select(hi)) > epsilon) {
    // Only possible when some source has no zero-cost target.
    throw Error(ErrorKind::kEmptyFeasible, "oracle: budget below the cheapest routing");
  }
  int steps = 0;
  while (hi - lo > kRelativeBracket * std::max(1.0, hi)) {
    if (++steps > kMaxBisections) {
      throw Error(ErrorKind::kBisectionStall, "oracle: multiplier bisection did not settle");
    }
    const double mid = 0.5 * (lo + hi);
    if (router.distortion(router.select(mid)) <= epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Walk from the feasible selection toward the infeasible one; the source
  // that crosses the budget is split.
  const auto sel_hi = router.select(hi);
  const auto sel_lo = router.select(lo);
  auto sel = sel_hi;
  double distortion = router.distortion(sel_hi);
  result.routing = router.routing(sel_hi);
  for (std::size_t a = 0; a < router.sources(); ++a) {
    if (sel_lo[a] == sel_hi[a] || router.mass(a) <= 0.0) continue;
    const double c_hi = router.candidates(a)[sel_hi[a]].cost;
    const double c_lo = router.candidates(a)[sel_lo[a]].cost;
    const double increase = router.mass(a) * (c_lo - c_hi);
    if (distortion + increase <= epsilon) {
      distortion += increase;
      result.routing.target[a] = router.candidates(a)[sel_lo[a]].target;
      continue;
    }
    const double theta = increase > 0.0 ? std::clamp((epsilon - distortion) / increase, 0.0, 1.0) : 0.0;
    if (theta > 0.0) {
      result.routing.split_source = static_cast<std::int64_t>(a);
      result.routing.split_target = router.candidates(a)[sel_lo[a]].target;
      result.routing.split_fraction = theta;
    }
    break;
  }
  result.multiplier = hi;
  evaluate(router, cost, targets, result);
  result.dual_bound = router.lagrangian_max(hi) + hi * epsilon;
  return result;
}

RoutingResult route_within_radius(std::span<const double> source_mass,
                                  std::span<const double> cost, std::span<const double> gain,
                                  double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::kValidation, "oracle: radius must be finite and >= 0", "epsilon");
  }
  const std::size_t n = gain.size();
  std::vector<double> restricted(cost.begin(), cost.end());
  const double limit = radius + kRadiusSlack * (1.0 + radius);
  for (double& c : restricted) {
    if (c > limit) c = kInf;
  }
  const Router router(source_mass, restricted, gain);
  RoutingResult result;
  result.routing = router.routing(router.select(0.0));
  evaluate(router, restricted, n, result);
  result.dual_bound = result.objective;
  return result;
}

Coupling to_coupling(const Routing& routing, std::span<const double> source_mass,
                     std::size_t targets) {
  Coupling out;
  out.sources = source_mass.size();
  out.targets = targets;
  out.plan.assign(out.sources * targets, 0.0);
  for (std::size_t a = 0; a < out.sources; ++a) {
    const double m = source_mass[a];
    if (routing.split_source == static_cast<std::int64_t>(a)) {
      const double moved = m * routing.split_fraction;
      out.plan[a * targets + routing.split_target] += moved;
      out.plan[a * targets + routing.target[a]] += m - moved;
    } else {
      out.plan[a * targets + routing.target[a]] += m;
    }
  }
  return out;
}

OracleResult constrained_linear_oracle(const JointDistribution& mu, const GroundCost& cost,
                                       double epsilon, std::span<const double> gain) {
  if (cost.nx() != mu.nx() || cost.ny() != mu.ny() || gain.size() != mu.points()) {
    throw Error(ErrorKind::kValidation, "constrained_linear_oracle: alphabet mismatch");
  }
  RoutingResult r = route_with_budget(mu.mass(), cost.pairs(), gain, epsilon);
  OracleResult out;
  out.coupling = to_coupling(r.routing, mu.mass(), mu.points());
  out.multiplier = r.multiplier;
  out.objective = r.objective;
  out.achieved_distortion = r.achieved_distortion;
  out.dual_bound = r.dual_bound;
  out.routing = std::move(r.routing);
  return out;
}

}  // namespace robent::transport
