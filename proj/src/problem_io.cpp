#include <cmath>
#include <limits>

#include "json.hpp"
#include "json_util.hpp"
#include "robent/io.hpp"

namespace robent::io {

using nlohmann::json;

namespace detail {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& path) {
  if (!j.is_object()) throw Error(ErrorKind::kValidation, path + ": expected an object", path);
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto name : allowed) known = known || item.key() == name;
    if (!known) {
      const std::string field = path.empty() ? item.key() : path + "." + item.key();
      throw Error(ErrorKind::kValidation, "unknown field '" + field + "'", field);
    }
  }
}

const json& require(const json& j, const char* key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!j.contains(key)) throw Error(ErrorKind::kValidation, "missing field '" + field + "'", field);
  return j.at(key);
}

double number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  throw Error(ErrorKind::kValidation, field + ": expected a number", field);
}

double finite_number(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (!std::isfinite(v)) throw Error(ErrorKind::kValidation, field + ": must be finite", field);
  return v;
}

std::uint64_t unsigned_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw Error(ErrorKind::kValidation, field + ": expected a nonnegative integer", field);
  }
  return j.get<std::uint64_t>();
}

bool boolean(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw Error(ErrorKind::kValidation, field + ": expected true or false", field);
  return j.get<bool>();
}

std::string string(const json& j, const std::string& field) {
  if (!j.is_string()) throw Error(ErrorKind::kValidation, field + ": expected a string", field);
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& field, bool allow_inf) {
  if (!j.is_array()) throw Error(ErrorKind::kValidation, field + ": expected an array", field);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = field + "[" + std::to_string(i) + "]";
    out.push_back(allow_inf ? number(j[i], at) : finite_number(j[i], at));
  }
  return out;
}

json number_json(double v) {
  if (std::isinf(v) && v > 0.0) return "inf";
  return v;
}

json numbers_json(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(number_json(v));
  return out;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSyntax, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

namespace {

SolverOptions parse_options(const json& j) {
  detail::check_keys(j, {"max_iterations", "fw_gap_tolerance", "gradient_clamp", "line_search"},
                     "options");
  SolverOptions opts;
  if (j.contains("max_iterations")) {
    const auto& v = j.at("max_iterations");
    if (!v.is_number_integer()) {
      throw Error(ErrorKind::kValidation, "options.max_iterations: expected an integer",
                  "options.max_iterations");
    }
    const auto n = v.get<std::int64_t>();
    if (n < 0 || n > std::numeric_limits<int>::max()) {
      throw Error(ErrorKind::kValidation, "options.max_iterations: out of range",
                  "options.max_iterations");
    }
    opts.max_iterations = static_cast<int>(n);
  }
  if (j.contains("fw_gap_tolerance")) {
    opts.fw_gap_tolerance =
        detail::finite_number(j.at("fw_gap_tolerance"), "options.fw_gap_tolerance");
  }
  if (j.contains("gradient_clamp")) {
    opts.gradient_clamp = detail::finite_number(j.at("gradient_clamp"), "options.gradient_clamp");
  }
  if (j.contains("line_search")) {
    const std::string ls = detail::string(j.at("line_search"), "options.line_search");
    if (ls == "golden") opts.line_search = LineSearch::kGolden;
    else if (ls == "harmonic") opts.line_search = LineSearch::kHarmonic;
    else throw Error(ErrorKind::kValidation, "options.line_search: expected golden or harmonic",
                     "options.line_search");
  }
  opts.validate();
  return opts;
}

void build_cost(ProblemFile& p) {
  if (p.cost_kind == CostKind::kExplicit) {
    if (p.label_preserving) {
      p.cost = GroundCost::explicit_base(p.nx, p.ny, p.cost_matrix);
    } else {
      p.cost = GroundCost::explicit_pairs(p.nx, p.ny, p.cost_matrix);
    }
  } else {
    p.cost = GroundCost::make(p.cost_kind, p.nx, p.ny, p.label_preserving);
  }
}

std::size_t dimension(const json& j, const char* key) {
  const std::uint64_t v = detail::unsigned_integer(detail::require(j, key, ""), key);
  if (v == 0 || v > 64) throw Error(ErrorKind::kValidation, std::string(key) + ": must be in 1..64", key);
  return static_cast<std::size_t>(v);
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  const json j = detail::parse_text(text);
  detail::check_keys(j, {"version", "nx", "ny", "mu", "cost", "constraint", "options", "seed"}, "");
  ProblemFile p;
  const std::uint64_t version = detail::unsigned_integer(detail::require(j, "version", ""), "version");
  if (version != static_cast<std::uint64_t>(kFormatVersion)) {
    throw Error(ErrorKind::kValidation, "version: only version 1 is supported", "version");
  }
  p.nx = dimension(j, "nx");
  p.ny = dimension(j, "ny");
  if (j.contains("seed")) p.seed = detail::unsigned_integer(j.at("seed"), "seed");

  if (j.contains("mu")) {
    auto mass = detail::numbers(j.at("mu"), "mu", false);
    if (mass.size() != p.nx * p.ny) {
      throw Error(ErrorKind::kValidation, "mu: expected nx * ny entries", "mu");
    }
    p.mu = JointDistribution(p.nx, p.ny, std::move(mass));
  } else if (p.seed) {
    p.mu_given = false;
    p.mu = seeded_joint(p.nx, p.ny, *p.seed);
  } else {
    throw Error(ErrorKind::kValidation, "missing field 'mu' (or a seed to draw it from)", "mu");
  }

  const json& cost = detail::require(j, "cost", "");
  detail::check_keys(cost, {"kind", "label_preserving", "matrix"}, "cost");
  p.cost_kind = parse_cost_kind(detail::string(detail::require(cost, "kind", "cost"), "cost.kind"));
  p.label_preserving =
      detail::boolean(detail::require(cost, "label_preserving", "cost"), "cost.label_preserving");
  if (p.cost_kind == CostKind::kExplicit) {
    p.cost_matrix = detail::numbers(detail::require(cost, "matrix", "cost"), "cost.matrix", true);
  } else if (cost.contains("matrix")) {
    throw Error(ErrorKind::kValidation, "cost.matrix: only explicit costs take a matrix",
                "cost.matrix");
  }
  build_cost(p);

  const json& constraint = detail::require(j, "constraint", "");
  detail::check_keys(constraint, {"kind", "epsilon"}, "constraint");
  p.constraint_kind = parse_constraint_kind(
      detail::string(detail::require(constraint, "kind", "constraint"), "constraint.kind"));
  p.epsilon = detail::finite_number(detail::require(constraint, "epsilon", "constraint"),
                                    "constraint.epsilon");
  if (j.contains("options")) p.options = parse_options(j.at("options"));
  if (p.seed) p.options.seed = *p.seed;
  p.spec().validate();
  return p;
}

void apply_seed(ProblemFile& p, std::uint64_t seed) {
  p.seed = seed;
  p.options.seed = seed;
  if (!p.mu_given) p.mu = seeded_joint(p.nx, p.ny, seed);
}

nlohmann::json problem_json(const ProblemFile& p) {
  json j;
  j["version"] = p.version;
  j["nx"] = p.nx;
  j["ny"] = p.ny;
  if (p.mu_given) j["mu"] = detail::numbers_json(p.mu.mass());
  json cost;
  cost["kind"] = cost_kind_name(p.cost_kind);
  cost["label_preserving"] = p.label_preserving;
  if (p.cost_kind == CostKind::kExplicit) cost["matrix"] = detail::numbers_json(p.cost_matrix);
  j["cost"] = cost;
  j["constraint"] = {{"kind", constraint_kind_name(p.constraint_kind)}, {"epsilon", p.epsilon}};
  j["options"] = {
      {"max_iterations", p.options.max_iterations},
      {"fw_gap_tolerance", p.options.fw_gap_tolerance},
      {"gradient_clamp", p.options.gradient_clamp},
      {"line_search", p.options.line_search == LineSearch::kGolden ? "golden" : "harmonic"},
  };
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

std::string write_problem(const ProblemFile& problem) { return problem_json(problem).dump(2) + "\n"; }

}  // namespace robent::io
