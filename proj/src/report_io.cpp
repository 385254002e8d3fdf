#include <cmath>

#include "json_util.hpp"

namespace robent::io {

using nlohmann::json;

namespace {

constexpr double kRecheckTolerance = 1e-9;

json matrix_json(std::span<const double> values, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    out.push_back(detail::numbers_json(values.subspan(r * cols, cols)));
  }
  return out;
}

std::vector<double> read_matrix(const json& j, std::size_t rows, std::size_t cols,
                                const std::string& field) {
  if (!j.is_array() || j.size() != rows) {
    throw Error(ErrorKind::kValidation, field + ": expected " + std::to_string(rows) + " rows",
                field);
  }
  std::vector<double> out;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string at = field + "[" + std::to_string(r) + "]";
    auto row = detail::numbers(j[r], at, false);
    if (row.size() != cols) {
      throw Error(ErrorKind::kValidation, at + ": expected " + std::to_string(cols) + " entries", at);
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

void recheck(bool ok, const std::string& what, const std::string& field) {
  if (!ok) throw Error(ErrorKind::kValidation, "report invariant violated: " + what, field);
}

}  // namespace

ReportFile make_report(const ProblemFile& problem, const SaddleCertificate& cert, double wall_ms) {
  ReportFile r;
  r.problem = problem;
  r.h_star = cert.solve.h_star;
  r.fw_gap = cert.solve.fw_gap;
  r.iterations = cert.solve.iterations;
  r.multiplier = cert.solve.multiplier;
  r.converged = cert.solve.converged;
  r.nu_star = cert.solve.nu_star;
  r.q_star = cert.rule.rule;
  r.coverage = cert.rule.covered;
  r.minimax_upper = cert.minimax_upper;
  r.maximin_lower = cert.maximin_lower;
  r.saddle_gap = cert.gap;
  r.unbounded = cert.unbounded;
  r.wall_ms = wall_ms;
  return r;
}

std::string write_report(const ReportFile& r) {
  json j;
  j["problem"] = problem_json(r.problem);
  j["h_star"] = r.h_star;
  j["fw_gap"] = r.fw_gap;
  j["iterations"] = r.iterations;
  j["multiplier"] = r.multiplier;
  j["converged"] = r.converged;
  j["nu_star"] = matrix_json(r.nu_star.mass(), r.nu_star.nx(), r.nu_star.ny());
  j["q_star"] = matrix_json(r.q_star.values(), r.q_star.nx(), r.q_star.ny());
  json coverage = json::array();
  for (bool c : r.coverage) coverage.push_back(c);
  j["coverage"] = coverage;
  j["saddle"] = {{"minimax_upper", r.minimax_upper},
                 {"maximin_lower", r.maximin_lower},
                 {"gap", r.saddle_gap},
                 {"unbounded", r.unbounded}};
  j["wall_ms"] = r.wall_ms;
  return j.dump(2) + "\n";
}

ReportFile read_report(std::string_view text) {
  const json j = detail::parse_text(text);
  detail::check_keys(j, {"problem", "h_star", "fw_gap", "iterations", "multiplier", "converged",
                         "nu_star", "q_star", "coverage", "saddle", "wall_ms"},
                     "");
  ReportFile r;
  r.problem = parse_problem(detail::require(j, "problem", "").dump());
  const std::size_t nx = r.problem.nx, ny = r.problem.ny;
  r.h_star = detail::finite_number(detail::require(j, "h_star", ""), "h_star");
  r.fw_gap = detail::finite_number(detail::require(j, "fw_gap", ""), "fw_gap");
  const auto iterations = detail::unsigned_integer(detail::require(j, "iterations", ""), "iterations");
  r.iterations = static_cast<int>(iterations);
  r.multiplier = detail::finite_number(detail::require(j, "multiplier", ""), "multiplier");
  r.converged = detail::boolean(detail::require(j, "converged", ""), "converged");
  r.nu_star = JointDistribution(nx, ny, read_matrix(detail::require(j, "nu_star", ""), nx, ny, "nu_star"));
  r.q_star = DecisionRule(nx, ny, read_matrix(detail::require(j, "q_star", ""), nx, ny, "q_star"));
  const json& coverage = detail::require(j, "coverage", "");
  if (!coverage.is_array() || coverage.size() != nx) {
    throw Error(ErrorKind::kValidation, "coverage: expected nx booleans", "coverage");
  }
  for (std::size_t x = 0; x < nx; ++x) {
    r.coverage.push_back(detail::boolean(coverage[x], "coverage[" + std::to_string(x) + "]"));
  }
  const json& saddle = detail::require(j, "saddle", "");
  detail::check_keys(saddle, {"minimax_upper", "maximin_lower", "gap", "unbounded"}, "saddle");
  r.minimax_upper =
      detail::finite_number(detail::require(saddle, "minimax_upper", "saddle"), "saddle.minimax_upper");
  r.maximin_lower =
      detail::finite_number(detail::require(saddle, "maximin_lower", "saddle"), "saddle.maximin_lower");
  r.saddle_gap = detail::finite_number(detail::require(saddle, "gap", "saddle"), "saddle.gap");
  r.unbounded = detail::boolean(detail::require(saddle, "unbounded", "saddle"), "saddle.unbounded");
  r.wall_ms = detail::finite_number(detail::require(j, "wall_ms", ""), "wall_ms");

  recheck(std::abs(r.h_star - conditional_entropy(r.nu_star)) <= kRecheckTolerance,
          "h_star differs from H(Y|X) of nu_star", "h_star");
  recheck(r.maximin_lower == r.h_star, "maximin_lower differs from h_star", "saddle.maximin_lower");
  recheck(std::abs(r.saddle_gap - (r.minimax_upper - r.maximin_lower)) <= kRecheckTolerance,
          "gap differs from minimax_upper - maximin_lower", "saddle.gap");
  recheck(r.saddle_gap >= -kRecheckTolerance, "negative saddle gap", "saddle.gap");
  recheck(r.wall_ms >= 0.0, "negative wall time", "wall_ms");
  const auto px = marginal_x(r.nu_star);
  for (std::size_t x = 0; x < nx; ++x) {
    recheck(r.coverage[x] == (px[x] > kCoverageThreshold), "coverage mask disagrees with nu_star",
            "coverage");
    if (!r.coverage[x]) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      recheck(std::abs(r.q_star(y, x) - r.nu_star(x, y) / px[x]) <= kRecheckTolerance,
              "q_star is not the posterior of nu_star on a covered row", "q_star");
    }
  }
  return r;
}

}  // namespace robent::io
