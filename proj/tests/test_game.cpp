#include <cmath>

#include "doctest.h"
#include "instances.hpp"
#include "robent/experiments.hpp"
#include "robent/game.hpp"

using namespace robent;

TEST_SUITE("game") {

TEST_CASE("extracted rule is the posterior of the maximizer") {
  const auto g = testing::random_game(4);
  const SolveReport r = max_conditional_entropy(g.spec);
  const ExtractedRule e = extract_rule(r, g.spec);
  const auto px = marginal_x(r.nu_star);
  for (std::size_t x = 0; x < px.size(); ++x) {
    CHECK(e.covered[x] == (px[x] > kCoverageThreshold));
    if (!e.covered[x]) continue;
    for (std::size_t y = 0; y < r.nu_star.ny(); ++y) {
      CHECK(e.rule(y, x) == doctest::Approx(r.nu_star(x, y) / px[x]).epsilon(1e-12));
    }
  }
}

TEST_CASE("best response against the uniform rule is log ny") {
  const auto g = testing::random_game(7);
  const std::size_t ny = g.spec.reference.ny();
  const AttackResult a = attack_best_response(DecisionRule::uniform(g.spec.reference.nx(), ny), g.spec);
  CHECK(a.loss == doctest::Approx(std::log(static_cast<double>(ny))).epsilon(1e-12));
  CHECK_FALSE(a.unbounded);
}

TEST_CASE("best response flags rules with zero entries") {
  const JointDistribution mu(2, 2, {0.5, 0.0, 0.0, 0.5});
  ConstraintSpec spec{ConstraintKind::kWassersteinBall, 1.0,
                      GroundCost::make(CostKind::kAbsoluteDifference, 2, 2, true), mu};
  const DecisionRule sure(2, 2, {1.0, 0.0, 0.0, 1.0});
  const AttackResult a = attack_best_response(sure, spec);
  CHECK(a.unbounded);
  CHECK(a.loss >= std::log(1e12) * 0.5 - 1e-9);
}

TEST_CASE("saddle gap closes on random games") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto g = testing::random_game(seed);
    const SaddleCertificate c = saddle_gap(g.spec);
    CHECK(c.gap >= -1e-9);
    CHECK(c.gap <= 1e-3);
    CHECK(c.maximin_lower == c.solve.h_star);
    CHECK(c.minimax_upper >= c.maximin_lower - 1e-9);
  }
}

TEST_CASE("zero budget extracts the clean posterior") {
  const JointDistribution mu(3, 2, {0.3, 0.2, 0.0, 0.0, 0.1, 0.4});
  ConstraintSpec spec{ConstraintKind::kWassersteinBall, 0.0,
                      GroundCost::make(CostKind::kAbsoluteDifference, 3, 2, true), mu};
  const ExtractedRule e = extract_rule(max_conditional_entropy(spec), spec);
  const Posterior clean = posterior(mu);
  CHECK(e.covered == clean.covered);
  for (std::size_t k = 0; k < 6; ++k) CHECK(e.rule.values()[k] == doctest::Approx(clean.rule.values()[k]));
}

TEST_CASE("rows the maximizer empties keep the certificate") {
  // Each of these games leaves some x without mass, and the clean posterior
  // there has zeros the attacker could exploit.
  for (std::uint64_t seed : {1033, 1036, 1042, 1047}) {
    const auto g = testing::random_game(seed);
    const SaddleCertificate c = saddle_gap(g.spec);
    std::size_t uncovered = 0;
    for (bool b : c.rule.covered) uncovered += !b;
    CHECK(uncovered > 0);
    CHECK(c.converged);
    CHECK(c.gap <= c.fw_gap + 1e-9);
    CHECK_FALSE(c.unbounded);
  }
}

TEST_CASE("deterministic attacks on the toy game") {
  const auto mu = toy_distribution();
  const auto cost = toy_cost();
  const double serial = deterministic_maximin_serial(mu, cost, 1.0);
  CHECK(deterministic_maximin(mu, cost, 1.0) == serial);
  CHECK(serial == doctest::Approx(2.0 / 3.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(deterministic_maximin(mu, cost, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("deterministic maximin refuses huge enumerations") {
  const auto mu = JointDistribution::uniform(12, 2);
  const auto cost = GroundCost::make(CostKind::kAbsoluteDifference, 12, 2, true);
  try {
    deterministic_maximin(mu, cost, 20.0);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooLarge);
  }
}

}
