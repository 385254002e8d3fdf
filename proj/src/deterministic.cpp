#include <algorithm>
#include <cmath>
#include <numeric>

#include "robent/game.hpp"

namespace robent {

namespace {

constexpr double kRadiusSlack = 1e-12;

struct Balls {
  std::vector<std::size_t> sources;
  std::vector<double> weight;
  std::vector<std::vector<std::size_t>> targets;
  std::uint64_t maps = 1;
};

Balls make_balls(const JointDistribution& mu, const GroundCost& cost, double epsilon) {
  if (cost.nx() != mu.nx() || cost.ny() != mu.ny()) {
    throw Error(ErrorKind::kValidation, "cost alphabet does not match mu", "cost");
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorKind::kValidation, "epsilon must be finite and >= 0", "epsilon");
  }
  const double radius = epsilon + kRadiusSlack * (1.0 + epsilon);
  Balls balls;
  for (std::size_t a = 0; a < mu.points(); ++a) {
    if (mu.at(a) <= kSupportThreshold) continue;
    std::vector<std::size_t> ball;
    for (std::size_t b = 0; b < mu.points(); ++b) {
      if (cost(a, b) <= radius) ball.push_back(b);
    }
    balls.sources.push_back(a);
    balls.weight.push_back(mu.at(a));
    if (balls.maps > kEnumerationLimit / ball.size() + 1) balls.maps = kEnumerationLimit + 1;
    else balls.maps *= ball.size();
    balls.targets.push_back(std::move(ball));
  }
  return balls;
}

void check_limit(const Balls& balls) {
  if (balls.maps > kEnumerationLimit) {
    throw Error(ErrorKind::kTooLarge, "more than 1e6 deterministic maps to enumerate", "epsilon");
  }
}

double map_value(const Balls& balls, std::uint64_t index, std::vector<double>& nu, std::size_t nx,
                 std::size_t ny) {
  std::fill(nu.begin(), nu.end(), 0.0);
  for (std::size_t s = 0; s < balls.sources.size(); ++s) {
    const auto& ball = balls.targets[s];
    nu[ball[index % ball.size()]] += balls.weight[s];
    index /= ball.size();
  }
  return kernels::conditional_entropy(nu, nx, ny);
}

// Euclidean projection of v onto {p >= floor, sum p = 1}.
void project_row(std::span<double> v, double floor) {
  const std::size_t n = v.size();
  const double budget = 1.0 - floor * static_cast<double>(n);
  std::vector<double> u(v.begin(), v.end());
  for (double& e : u) e -= floor;
  std::vector<double> sorted = u;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0, shift = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += sorted[k];
    const double t = (cum - budget) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) shift = t;
  }
  for (std::size_t k = 0; k < n; ++k) v[k] = std::max(u[k] - shift, 0.0) + floor;
}

}  // namespace

double deterministic_maximin(const JointDistribution& mu, const GroundCost& cost, double epsilon) {
  const Balls balls = make_balls(mu, cost, epsilon);
  check_limit(balls);
  const auto total = static_cast<std::int64_t>(balls.maps);
  double best = -kInf;
#pragma omp parallel
  {
    std::vector<double> nu(mu.points());
#pragma omp for reduction(max : best) schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      best = std::max(best, map_value(balls, static_cast<std::uint64_t>(i), nu, mu.nx(), mu.ny()));
    }
  }
  return std::max(best, 0.0);
}

double deterministic_maximin_serial(const JointDistribution& mu, const GroundCost& cost,
                                    double epsilon) {
  const Balls balls = make_balls(mu, cost, epsilon);
  check_limit(balls);
  std::vector<double> nu(mu.points());
  double best = -kInf;
  for (std::uint64_t i = 0; i < balls.maps; ++i) {
    best = std::max(best, map_value(balls, i, nu, mu.nx(), mu.ny()));
  }
  return std::max(best, 0.0);
}

double deterministic_minimax(const JointDistribution& mu, const GroundCost& cost, double epsilon,
                             const MinimaxOptions& opts) {
  if (opts.iterations <= 0 || !(opts.step > 0.0)) {
    throw Error(ErrorKind::kValidation, "iterations and step must be positive", "options");
  }
  if (!(opts.delta > 0.0) || opts.delta > 1e-3) {
    throw Error(ErrorKind::kValidation, "delta must lie in (0, 1e-3]", "options.gradient_clamp");
  }
  const Balls balls = make_balls(mu, cost, epsilon);
  const std::size_t nx = mu.nx(), ny = mu.ny();
  std::vector<double> q(nx * ny, 1.0 / static_cast<double>(ny));
  std::vector<double> grad(q.size());

  // Returns F(q) and leaves a subgradient in `grad`.
  const auto evaluate = [&]() {
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    for (std::size_t s = 0; s < balls.sources.size(); ++s) {
      std::size_t worst = balls.targets[s].front();
      for (std::size_t b : balls.targets[s]) {
        if (q[b] < q[worst]) worst = b;
      }
      const double qv = std::max(q[worst], opts.delta);
      value -= balls.weight[s] * std::log(qv);
      grad[worst] -= balls.weight[s] / qv;
    }
    return value;
  };

  double best = evaluate();
  for (int t = 1; t <= opts.iterations; ++t) {
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    const double eta = opts.step / (std::sqrt(static_cast<double>(t)) * norm);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= eta * grad[i];
    for (std::size_t x = 0; x < nx; ++x) {
      project_row(std::span<double>(q).subspan(x * ny, ny), opts.delta);
    }
    best = std::min(best, evaluate());
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::kNotConverged, "subgradient descent produced a non-finite value", "");
  }
  return best;
}

}  // namespace robent
