#pragma once

// Pairwise Frank-Wolfe over couplings with fixed source masses. The
// objective is H(nu) - kappa * <gamma, cost>, where nu is the target
// marginal of gamma laid out over an nx x ny grid.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "robent/maxent.hpp"

namespace robent::detail {

struct Cell {
  std::uint32_t source;
  std::uint32_t target;
  double mass;
};

// A source whose mass is divided between two targets. Vertices that differ
// only in `theta` lie on one segment and are merged in the active set.
struct Split {
  std::uint32_t source = 0;
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double mass = 0.0;
  double theta = 0.0;  // share of `mass` sent to `to`
};

struct Vertex {
  std::vector<Cell> cells;  // with the split source sent entirely to `split.from`
  bool has_split = false;
  Split split;
  double multiplier = 0.0;
};

// Returns the coupling maximizing sum_cells mass * (gain(target) - kappa * cost).
using VertexOracle = std::function<Vertex(std::span<const double> gain)>;

struct FwProblem {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t sources = 0;
  std::span<const double> cost;  // sources x (nx * ny); may hold +inf off the feasible cells
  double kappa = 0.0;
  VertexOracle oracle;
  std::vector<Vertex> start;          // feasible atoms
  std::vector<double> start_weights;  // convex weights of `start`
  // Rule used for the gradient on rows the iterate leaves empty.
  std::vector<double> empty_row_rule;  // nx * ny
};

struct FwResult {
  std::vector<double> nu;       // nx * ny
  std::vector<double> coupling; // sources x (nx * ny)
  double objective = 0.0;
  double linear_term = 0.0;
  double gap = 0.0;
  int iterations = 0;
  double multiplier = 0.0;
  bool converged = false;
  std::vector<double> trace;
  std::vector<double> rule;  // empty-row rule behind `gap`
};

Vertex routing_vertex(const transport::Routing& routing, std::span<const double> source_mass);

FwResult run_frank_wolfe(const FwProblem& problem, const SolverOptions& opts);

// Clamped -ln posterior on rows with mass, `empty_row_rule` elsewhere.
void solver_gradient(std::span<const double> nu, std::size_t nx, std::size_t ny, double delta,
                     std::span<const double> empty_row_rule, std::vector<double>& out);

}  // namespace robent::detail
