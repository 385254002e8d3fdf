#include <cmath>

#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"
#include "robent/transport.hpp"

using namespace robent;
using namespace robent::transport;

namespace {

// max gain.x  s.t.  each source ships its mass, total cost <= epsilon.
oracle::LpResult routing_lp(std::span<const double> mass, std::span<const double> cost,
                            std::span<const double> gain, double epsilon) {
  const std::size_t s = mass.size(), t = gain.size();
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k < s * t; ++k) {
    if (std::isfinite(cost[k])) cells.push_back(k);
  }
  const std::size_t cols = cells.size() + 1, rows = s + 1;
  std::vector<double> a(rows * cols, 0.0), b(rows, 0.0), c(cols, 0.0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::size_t src = cells[k] / t, dst = cells[k] % t;
    a[src * cols + k] = 1.0;
    a[s * cols + k] = cost[cells[k]];
    c[k] = -gain[dst];
  }
  a[s * cols + cells.size()] = 1.0;  // slack
  for (std::size_t i = 0; i < s; ++i) b[i] = mass[i];
  b[s] = epsilon;
  auto r = oracle::dense_simplex(rows, cols, std::move(a), std::move(b), std::move(c));
  r.value = -r.value;
  return r;
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("oracles agree with each other") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.below(4), n = 1 + rng.below(4);
    const auto s = oracle::random_simplex(rng, m, 0.2), d = oracle::random_simplex(rng, n, 0.2);
    std::vector<double> c(m * n);
    for (double& v : c) v = rng.uniform();
    const auto a = oracle::transport_by_vertices(s, d, c);
    const auto b = oracle::transport_by_simplex(s, d, c);
    REQUIRE(a.feasible);
    REQUIRE(b.feasible);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
  }
}

TEST_CASE("solve_transport matches the vertex oracle") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + rng.below(5), n = 1 + rng.below(5);
    const auto s = oracle::random_simplex(rng, m, 0.3), d = oracle::random_simplex(rng, n, 0.3);
    std::vector<double> c(m * n);
    for (double& v : c) v = std::floor(rng.uniform() * 4.0);  // ties on purpose
    const auto ref = oracle::transport_by_vertices(s, d, c);
    const TransportResult r = solve_transport(s, d, c);
    CHECK(std::abs(r.value - ref.value) <= 1e-10);
    CHECK(verify_duality(r.coupling, r.duals, c) <= 1e-10);
    const auto rows = r.coupling.row_sums(), cols = r.coupling.column_sums();
    for (std::size_t i = 0; i < m; ++i) CHECK(rows[i] == doctest::Approx(s[i]).epsilon(1e-12));
    for (std::size_t j = 0; j < n; ++j) CHECK(cols[j] == doctest::Approx(d[j]).epsilon(1e-12));
  }
}

TEST_CASE("infinite costs split the problem into blocks") {
  const std::vector<double> s = {0.3, 0.7}, d = {0.3, 0.7};
  const std::vector<double> c = {1.0, kInf, kInf, 2.0};
  const auto r = solve_transport(s, d, c);
  CHECK(r.value == doctest::Approx(0.3 + 1.4));
  CHECK(r.coupling(0, 1) == 0.0);
  const std::vector<double> bad = {0.5, 0.5};
  CHECK_THROWS_AS(solve_transport(s, bad, c), Error);
}

TEST_CASE("wasserstein distance is zero on identical inputs") {
  oracle::Rng rng(2);
  const auto mu = testing::random_joint(rng, 3, 3, 0.3);
  const auto cost = GroundCost::make(CostKind::kSquaredDifference, 3, 3, true);
  const auto r = wasserstein_distance(mu, mu, cost);
  CHECK(std::abs(r.value) < 1e-15);
  CHECK(verify_duality(r.coupling, r.duals, cost) <= 1e-12);
}

TEST_CASE("budgeted routing matches the LP optimum") {
  oracle::Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t s = 1 + rng.below(5), t = 1 + rng.below(5);
    const auto mass = oracle::random_simplex(rng, s, 0.2);
    std::vector<double> cost(s * t), gain(t);
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t b = 0; b < t; ++b) {
        cost[a * t + b] = rng.uniform() < 0.2 ? kInf : rng.uniform() * 2.0;
      }
      cost[a * t + rng.below(t)] = 0.0;  // a free target keeps the budget feasible
    }
    for (double& g : gain) g = rng.uniform() * 3.0;
    const double eps = rng.uniform();
    const RoutingResult r = route_with_budget(mass, cost, gain, eps);
    const auto ref = routing_lp(mass, cost, gain, eps);
    REQUIRE(ref.feasible);
    CHECK(r.objective == doctest::Approx(ref.value).epsilon(1e-9));
    CHECK(r.achieved_distortion <= eps + 1e-12);
    CHECK(r.dual_bound >= ref.value - 1e-9);
    ++checked;
  }
  CHECK(checked == 80);
}

TEST_CASE("routing refuses budgets below the cheapest routing") {
  const std::vector<double> mass = {1.0}, cost = {1.0, 2.0}, gain = {0.0, 1.0};
  try {
    route_with_budget(mass, cost, gain, 0.5);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyFeasible);
  }
}

TEST_CASE("radius routing picks the best reachable target") {
  const std::vector<double> mass = {0.5, 0.5};
  const std::vector<double> cost = {0.0, 1.0, 3.0, 2.0, 0.0, 1.0};
  const std::vector<double> gain = {0.0, 1.0, 5.0};
  const auto r = route_within_radius(mass, cost, gain, 1.0);
  CHECK(r.routing.target[0] == 1);
  CHECK(r.routing.target[1] == 2);
  CHECK(r.objective == doctest::Approx(3.0));
}

}
