#pragma once

// Independent reference implementations used only by the tests.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
  std::uint64_t vertices = 0;  // bases examined
};

// Transportation problem by enumerating every spanning tree of the bipartite
// graph of finite-cost cells, solving each tree's flows, and keeping the
// cheapest nonnegative one. Exponential; meant for at most 6 x 6.
LpResult transport_by_vertices(std::span<const double> supply, std::span<const double> demand,
                               std::span<const double> cost);

// Dense two-phase tableau simplex with Bland's rule:
// min c.x  s.t.  A x = b, x >= 0.  A is rows x cols, row-major.
LpResult dense_simplex(std::size_t rows, std::size_t cols, std::vector<double> a,
                       std::vector<double> b, std::vector<double> c);

// Transportation problem through dense_simplex (inf cells dropped).
LpResult transport_by_simplex(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

// Conditional entropy straight from the definition, in long double.
double conditional_entropy(std::span<const double> mass, std::size_t nx, std::size_t ny);

// Small deterministic generator for test instances.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1DULL;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t s_;
};

std::vector<double> random_simplex(Rng& rng, std::size_t n, double zero_share = 0.0);

}  // namespace oracle
