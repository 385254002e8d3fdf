#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "robent/io.hpp"

namespace robent::io {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open '" + path + "'", "file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kValidation, "cannot write '" + path.string() + "'", "out");
  out << text;
}

ProblemFile load_problem(const std::string& path) {
  ProblemFile p = parse_problem(read_file(path));
  if (const char* env = std::getenv("ROBUST_ENTROPY_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long seed = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0' || errno != 0 || *env == '-') {
      throw Error(ErrorKind::kValidation, "ROBUST_ENTROPY_SEED must be an unsigned integer",
                  "ROBUST_ENTROPY_SEED");
    }
    apply_seed(p, seed);
  }
  return p;
}

std::vector<double> parse_grid(const std::string& text) {
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t next = text.find(':', pos);
    if ((i < 2) == (next == std::string::npos)) {
      throw Error(ErrorKind::kValidation, "grid must look like a:b:step", "grid");
    }
    const std::string part = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    char* end = nullptr;
    v[i] = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0' || !std::isfinite(v[i])) {
      throw Error(ErrorKind::kValidation, "grid must look like a:b:step", "grid");
    }
    pos = next + 1;
  }
  if (!(v[2] > 0.0) || v[1] < v[0]) {
    throw Error(ErrorKind::kValidation, "grid needs step > 0 and b >= a", "grid");
  }
  const auto n = static_cast<std::size_t>(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
  if (n > 1000) throw Error(ErrorKind::kValidation, "grid has more than 1000 points", "grid");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = v[0] + v[2] * static_cast<double>(i);
  return grid;
}

std::vector<std::uint64_t> parse_n_values(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const unsigned long long n = std::strtoull(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || item[0] == '-') {
      throw Error(ErrorKind::kValidation, "n must be a comma-separated list of integers", "n");
    }
    out.push_back(n);
  }
  return out;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
    case ErrorKind::kSyntax:
    case ErrorKind::kTooLarge:
      return 1;
    case ErrorKind::kNotConverged:
    case ErrorKind::kNumericalDegeneracy:
    case ErrorKind::kBisectionStall:
      return 2;
    case ErrorKind::kInfeasible:
    case ErrorKind::kEmptyFeasible:
      return 3;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Robust conditional-entropy games on finite alphabets"};
  app.require_subcommand(1);

  std::string file, out_dir, grid_text = "0:2:0.05", n_text = "2,10,1000";
  double lambda = 0.05;

  auto* solve = app.add_subcommand("solve", "Solve the max conditional entropy problem in FILE");
  solve->add_option("FILE", file, "problem file")->required();
  auto* sweep = app.add_subcommand("sweep", "Tradeoff sweep over expected-distortion budgets");
  sweep->add_option("FILE", file, "problem file (mu and cost are used)")->required();
  sweep->add_option("--grid", grid_text, "a:b:step");
  sweep->add_option("--out", out_dir, "output directory")->required();
  auto* toy = app.add_subcommand("toy-example", "Five-letter example with a radius-1 attacker");
  auto* fixed = app.add_subcommand("fixed-point", "Penalized transport fixed point");
  fixed->add_option("FILE", file, "problem file")->required();
  fixed->add_option("--lambda", lambda, "entropy weight");
  auto* counter = app.add_subcommand("counterexample", "Posterior discontinuity table");
  counter->add_option("--n", n_text, "comma-separated n values");
  auto* det = app.add_subcommand("det-gap", "Deterministic versus randomized attacks");
  det->add_option("FILE", file, "problem file")->required();
  auto* mech = app.add_subcommand("design-mechanism", "Distortion-bounded privacy channel");
  mech->add_option("FILE", file, "problem file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) {
      const ProblemFile p = load_problem(file);
      const auto t0 = std::chrono::steady_clock::now();
      const SaddleCertificate cert = saddle_gap(p.spec(), p.options);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::cout << write_report(make_report(p, cert, ms));
      if (!cert.converged) {
        std::cerr << "robent: solver did not reach the gap tolerance (fw_gap " << cert.fw_gap << ")\n";
        return 2;
      }
      return 0;
    }
    if (sweep->parsed()) {
      const ProblemFile p = load_problem(file);
      const SweepGrid grid = run_tradeoff_sweep(p.mu, p.cost, parse_grid(grid_text), p.options);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      write_file(dir / "sweep.csv", write_sweep_csv(grid));
      const Plots plots = render_plots(grid);
      write_file(dir / "loss_by_rule.svg", plots.by_rule);
      write_file(dir / "loss_by_attack.svg", plots.by_attack);
      bool ok = true;
      for (bool c : grid.cell_converged) ok = ok && c;
      if (!ok) {
        std::cerr << "robent: some sweep cells did not converge or failed\n";
        return 2;
      }
      return 0;
    }
    if (toy->parsed()) {
      const ToyReport r = run_toy_example();
      std::cout << toy_report_json(r);
      return r.converged ? 0 : 2;
    }
    if (fixed->parsed()) {
      const ProblemFile p = load_problem(file);
      const FixedPointReport r = run_fixed_point(p.mu, p.cost, lambda, p.options);
      std::cout << fixed_point_json(r);
      return r.converged ? 0 : 2;
    }
    if (counter->parsed()) {
      std::cout << counterexample_json(run_counterexample(parse_n_values(n_text)));
      return 0;
    }
    if (det->parsed()) {
      const ProblemFile p = load_problem(file);
      std::cout << deterministic_json(deterministic_attack(p.mu, p.cost, p.epsilon, p.options));
      return 0;
    }
    if (mech->parsed()) {
      const ProblemFile p = load_problem(file);
      const MechanismReport r = design_privacy_mechanism(p.mu, p.cost, p.epsilon, p.options);
      std::cout << mechanism_json(r, p.epsilon);
      return r.converged ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "robent: " << ErrorKindName(e.kind()) << ": " << e.what();
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "robent: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace robent::io
