// Serial versus OpenMP timings for the two parallel kernels: the
// deterministic-map enumeration and the tradeoff sweep.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "robent/experiments.hpp"
#include "robent/game.hpp"

namespace {

template <class F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  using namespace robent;
  std::printf("threads: %d\n", omp_get_max_threads());

  // Eight interior support points on a 9 x 3 alphabet, radius 2: 5^8 maps.
  std::vector<double> mass(27, 0.0);
  const std::size_t xs[] = {2, 3, 4, 5, 6, 2, 4, 6};
  for (std::size_t i = 0; i < 8; ++i) mass[point_index(xs[i], i % 3, 3)] += 1.0 / 8.0;
  const JointDistribution mu(9, 3, mass);
  const GroundCost cost = GroundCost::make(CostKind::kAbsoluteDifference, 9, 3, true);
  double serial = 0.0, parallel = 0.0;
  const double ts = time_ms([&] { serial = deterministic_maximin_serial(mu, cost, 2.0); });
  const double tp = time_ms([&] { parallel = deterministic_maximin(mu, cost, 2.0); });
  std::printf("maximin enumeration  serial %9.1f ms  parallel %9.1f ms  speedup %.2f  |diff| %.1e\n",
              ts, tp, ts / tp, std::abs(serial - parallel));

  const JointDistribution sweep_mu = default_sweep_distribution();
  const GroundCost sweep_cost =
      GroundCost::make(CostKind::kSquaredDifference, kDefaultNx, kDefaultNy, true);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
  SweepGrid a, b;
  const double ss = time_ms([&] { a = run_tradeoff_sweep_serial(sweep_mu, sweep_cost, grid); });
  const double sp = time_ms([&] { b = run_tradeoff_sweep(sweep_mu, sweep_cost, grid); });
  double diff = 0.0;
  for (std::size_t i = 0; i < a.loss.size(); ++i) diff = std::max(diff, std::abs(a.loss[i] - b.loss[i]));
  std::printf("sweep 11x11          serial %9.1f ms  parallel %9.1f ms  speedup %.2f  |diff| %.1e\n",
              ss, sp, ss / sp, diff);
  return 0;
}
