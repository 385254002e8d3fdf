#include <cmath>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "robent/io.hpp"

using namespace robent;
using namespace robent::io;

namespace {

const char* kProblem = R"({
  "version": 1, "nx": 2, "ny": 2,
  "mu": [0.4, 0.1, 0.2, 0.3],
  "cost": {"kind": "absolute-difference", "label_preserving": true},
  "constraint": {"kind": "wasserstein_ball", "epsilon": 0.15}
})";

ErrorKind kind_of(const std::string& text, std::string* field = nullptr) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    if (field) *field = e.field();
    return e.kind();
  }
  FAIL("parse succeeded");
  return ErrorKind::kValidation;
}

std::string with(const std::string& key, const nlohmann::json& value) {
  auto j = nlohmann::json::parse(kProblem);
  j[key] = value;
  return j.dump();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("parses a minimal problem") {
  const ProblemFile p = parse_problem(kProblem);
  CHECK(p.nx == 2);
  CHECK(p.mu(1, 1) == 0.3);
  CHECK(p.constraint_kind == ConstraintKind::kWassersteinBall);
  CHECK(p.epsilon == 0.15);
  CHECK(p.cost(0, 2) == 1.0);
}

TEST_CASE("problem round trip is exact") {
  const ProblemFile p = parse_problem(kProblem);
  const ProblemFile q = parse_problem(write_problem(p));
  CHECK(write_problem(p) == write_problem(q));
  for (std::size_t k = 0; k < 4; ++k) CHECK(p.mu.at(k) == q.mu.at(k));
}

TEST_CASE("malformed text is a syntax error") {
  CHECK(kind_of("{\"version\": 1,") == ErrorKind::kSyntax);
}

TEST_CASE("validation errors name the field") {
  std::string field;
  CHECK(kind_of(with("mu", {0.5, 0.5, 0.5, 0.5}), &field) == ErrorKind::kValidation);
  CHECK(field == "mu");
  CHECK(kind_of(with("extra", 1), &field) == ErrorKind::kValidation);
  CHECK(field == "extra");
  CHECK(kind_of(with("version", 2), &field) == ErrorKind::kValidation);
  CHECK(field == "version");
  CHECK(kind_of(with("nx", 0), &field) == ErrorKind::kValidation);
  CHECK(field == "nx");
  CHECK(kind_of(with("constraint", {{"kind", "wasserstein_ball"}, {"epsilon", -1}}), &field) ==
        ErrorKind::kValidation);
  CHECK(field == "constraint.epsilon");
  CHECK(kind_of(with("options", {{"line_search", "none"}}), &field) == ErrorKind::kValidation);
  CHECK(field == "options.line_search");
}

TEST_CASE("explicit matrices accept inf") {
  auto j = nlohmann::json::parse(kProblem);
  j["cost"] = {{"kind", "explicit"}, {"label_preserving", true}, {"matrix", {0.0, 2.0, "inf", 0.0}}};
  const ProblemFile p = parse_problem(j.dump());
  CHECK(std::isinf(p.cost.base(1, 0)));
  CHECK(write_problem(p).find("\"inf\"") != std::string::npos);
}

TEST_CASE("seeded problems may omit mu") {
  auto j = nlohmann::json::parse(kProblem);
  j.erase("mu");
  j["seed"] = 7;
  ProblemFile p = parse_problem(j.dump());
  CHECK_FALSE(p.mu_given);
  const double before = p.mu(0, 0);
  apply_seed(p, 8);
  CHECK(p.mu(0, 0) != before);
  j.erase("seed");
  CHECK(kind_of(j.dump()) == ErrorKind::kValidation);
}

TEST_CASE("report round trip and tamper detection") {
  const ProblemFile p = parse_problem(kProblem);
  const SaddleCertificate cert = saddle_gap(p.spec(), p.options);
  const std::string text = write_report(make_report(p, cert, 1.5));
  const ReportFile r = read_report(text);
  CHECK(r.h_star == cert.solve.h_star);
  CHECK(write_report(r) == text);

  auto j = nlohmann::json::parse(text);
  j["h_star"] = j["h_star"].get<double>() + 1e-3;
  CHECK_THROWS_AS(read_report(j.dump()), Error);
  j = nlohmann::json::parse(text);
  j["saddle"]["gap"] = -1.0;
  CHECK_THROWS_AS(read_report(j.dump()), Error);
}

TEST_CASE("sweep csv and plots") {
  SweepGrid g;
  g.epsilon_rule = g.epsilon_attack = {0.0, 0.5};
  g.loss = {0.3, 0.4, 0.5, 0.45};
  g.cell_converged = {true, true, true, false};
  g.h_star_curve = {0.3, 0.45};
  const std::string csv = write_sweep_csv(g);
  CHECK(csv.rfind("epsilon_attack,epsilon_rule,loss_nats,h_star_nats,converged\n", 0) == 0);
  CHECK(csv.find("0.5,0.5,0.45,0.45,false\n") != std::string::npos);
  const Plots a = render_plots(g), b = render_plots(g);
  CHECK(a.by_rule == b.by_rule);
  CHECK(a.by_attack.find("stroke-dasharray") != std::string::npos);
  CHECK(a.by_rule.rfind("<svg", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::kValidation) == 1);
  CHECK(exit_code(ErrorKind::kSyntax) == 1);
  CHECK(exit_code(ErrorKind::kNotConverged) == 2);
  CHECK(exit_code(ErrorKind::kInfeasible) == 3);
}

}
