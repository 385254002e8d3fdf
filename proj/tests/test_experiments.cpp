#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "robent/experiments.hpp"

using namespace robent;

TEST_SUITE("experiments") {

TEST_CASE("seeded joints are reproducible") {
  const auto a = seeded_joint(4, 3, 99), b = seeded_joint(4, 3, 99), c = seeded_joint(4, 3, 100);
  CHECK(std::equal(a.mass().begin(), a.mass().end(), b.mass().begin()));
  CHECK_FALSE(std::equal(a.mass().begin(), a.mass().end(), c.mass().begin()));
  double total = 0.0;
  for (double v : a.mass()) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("default sweep seed lands in the entropy windows") {
  CHECK(find_sweep_seed(0) == kDefaultSweepSeed);
  const auto mu = default_sweep_distribution();
  CHECK(mu.nx() == kDefaultNx);
  CHECK(mu.ny() == kDefaultNy);
  const double hy = entropy(marginal_y(mu)), hyx = conditional_entropy(mu);
  CHECK(hy >= 1.5);
  CHECK(hy <= 1.7);
  CHECK(hyx >= 0.3);
  CHECK(hyx <= 0.4);
}

TEST_CASE("default grid") {
  const auto g = default_grid();
  REQUIRE(g.size() == 41);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("saturation budget on a two-point example") {
  const JointDistribution mu(2, 1, {0.25, 0.75});
  const auto cost = GroundCost::make(CostKind::kAbsoluteDifference, 2, 1, true);
  CHECK(saturation_budget(mu, cost) == doctest::Approx(0.25));
}

TEST_CASE("small sweep is the same serial and parallel") {
  const auto mu = seeded_joint(3, 2, 5);
  const auto cost = GroundCost::make(CostKind::kSquaredDifference, 3, 2, true);
  const std::vector<double> grid = {0.0, 0.2, 0.5};
  const SweepGrid a = run_tradeoff_sweep(mu, cost, grid), b = run_tradeoff_sweep_serial(mu, cost, grid);
  REQUIRE(a.loss.size() == 9);
  for (std::size_t k = 0; k < a.loss.size(); ++k) CHECK(a.loss[k] == b.loss[k]);
  CHECK(a.at(0, 0) == doctest::Approx(conditional_entropy(mu)).epsilon(1e-9));
}

TEST_CASE("counterexample posteriors") {
  const auto rows = run_counterexample({2, 10, 1000});
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    const double n = static_cast<double>(r.n);
    CHECK(r.q_n_x1 == 1.0);
    CHECK(r.q_prime_x1 == 0.0);
    CHECK(std::abs(r.q_n_x0 - (n - 1) / (2 * n - 1)) <= 1e-15);
    CHECK(std::abs(r.q_prime_x0 - n / (2 * n - 1)) <= 1e-15);
  }
  CHECK(rows[2].tv_p < rows[0].tv_p);
}

TEST_CASE("fixed point refuses infinite costs") {
  const auto mu = seeded_joint(3, 3, 1);
  const auto cost = GroundCost::make(CostKind::kAbsoluteDifference, 3, 3, true);
  CHECK_THROWS_AS(run_fixed_point(mu, cost, 0.05), Error);
}

TEST_CASE("mechanism leakage matches the entropy gap") {
  const auto mu = seeded_joint(3, 3, 8);
  const auto cost = GroundCost::make(CostKind::kAbsoluteDifference, 3, 3, true);
  const MechanismReport m = design_privacy_mechanism(mu, cost, 0.3);
  CHECK(m.leakage == doctest::Approx(entropy(marginal_y(mu)) - m.h_star).epsilon(1e-12));
  CHECK(m.distortion <= 0.3 + 1e-9);
  CHECK(m.channel.nz() == 3);
}

}
