#include "robent/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

namespace robent::transport {

std::vector<double> Coupling::row_sums() const {
  std::vector<double> out(sources, 0.0);
  for (std::size_t a = 0; a < sources; ++a) {
    for (std::size_t b = 0; b < targets; ++b) out[a] += plan[a * targets + b];
  }
  return out;
}

std::vector<double> Coupling::column_sums() const {
  std::vector<double> out(targets, 0.0);
  for (std::size_t a = 0; a < sources; ++a) {
    for (std::size_t b = 0; b < targets; ++b) out[b] += plan[a * targets + b];
  }
  return out;
}

namespace {

constexpr double kPositiveFlow = 1e-14;
constexpr double kBalanceTolerance = 1e-9;
constexpr double kPerturbation = 1e-9;

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

// Dense transportation simplex on one block whose points are linked by
// finite costs. Infinite cells carry a big-M cost and may only appear in
// the basis at zero flow in a feasible answer.
class BlockSimplex {
 public:
  BlockSimplex(std::vector<double> supply, std::vector<double> demand, std::vector<double> cost)
      : m_(supply.size()), n_(demand.size()), supply_(std::move(supply)),
        demand_(std::move(demand)), cost_(std::move(cost)), infinite_(m_ * n_, 0) {
    double max_finite = 0.0;
    for (double c : cost_) {
      if (std::isfinite(c)) max_finite = std::max(max_finite, c);
    }
    const double big_m = (1.0 + max_finite) * 1e6;
    for (std::size_t k = 0; k < cost_.size(); ++k) {
      if (!std::isfinite(cost_[k])) {
        infinite_[k] = 1;
        cost_[k] = big_m;
      }
    }
    tolerance_ = 1e-12 * (1.0 + max_finite);
  }

  // Returns false when the pivot cap is hit.
  bool solve(std::span<const double> supply, std::span<const double> demand,
             std::size_t max_pivots) {
    initial_basis(supply, demand);
    std::size_t degenerate_run = 0;
    while (true) {
      compute_potentials();
      const std::int64_t entering = choose_entering(degenerate_run > m_ + n_);
      if (entering < 0) return true;
      if (pivots_ >= max_pivots) return false;
      const bool degenerate = pivot(static_cast<std::size_t>(entering), supply, demand);
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
      ++pivots_;
    }
  }

  // Recomputes flows on the current basis for other supplies. False when a
  // flow comes out clearly negative.
  bool reflow(std::span<const double> supply, std::span<const double> demand) {
    compute_flows(supply, demand);
    for (std::size_t k : basis_) {
      if (flow_[k] < -1e-10) return false;
      flow_[k] = std::max(flow_[k], 0.0);
    }
    return true;
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  double flow(std::size_t i, std::size_t j) const { return flow_[i * n_ + j]; }
  bool infinite(std::size_t i, std::size_t j) const { return infinite_[i * n_ + j] != 0; }
  double u(std::size_t i) const { return u_[i]; }
  double v(std::size_t j) const { return v_[j]; }
  std::size_t pivots() const { return pivots_; }

 private:
  void initial_basis(std::span<const double> supply, std::span<const double> demand) {
    basis_.clear();
    in_basis_.assign(m_ * n_, 0);
    flow_.assign(m_ * n_, 0.0);
    std::vector<double> rs(supply.begin(), supply.end());
    std::vector<double> rt(demand.begin(), demand.end());
    std::vector<char> row_alive(m_, 1), col_alive(n_, 1);
    std::size_t alive_rows = m_, alive_cols = n_;
    while (alive_rows > 0 && alive_cols > 0) {
      std::size_t best = m_ * n_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive[i]) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          if (!col_alive[j]) continue;
          const std::size_t k = i * n_ + j;
          if (best == m_ * n_ || cost_[k] < cost_[best]) best = k;
        }
      }
      const std::size_t i = best / n_, j = best % n_;
      const double amount = std::max(0.0, std::min(rs[i], rt[j]));
      basis_.push_back(best);
      in_basis_[best] = 1;
      flow_[best] = amount;
      if (alive_rows == 1 && alive_cols == 1) break;
      if ((rs[i] <= rt[j] && alive_rows > 1) || alive_cols == 1) {
        row_alive[i] = 0;
        --alive_rows;
        rt[j] -= amount;
        rs[i] = 0.0;
      } else {
        col_alive[j] = 0;
        --alive_cols;
        rs[i] -= amount;
        rt[j] = 0.0;
      }
    }
    compute_flows(supply, demand);
  }

  void build_adjacency() {
    adjacency_.assign(m_ + n_, {});
    for (std::size_t k : basis_) {
      adjacency_[k / n_].push_back(k);
      adjacency_[m_ + k % n_].push_back(k);
    }
  }

  std::size_t other_end(std::size_t node, std::size_t cell) const {
    return node < m_ ? m_ + cell % n_ : cell / n_;
  }

  // Flows on a spanning tree are fixed by the margins: peel leaves.
  void compute_flows(std::span<const double> supply, std::span<const double> demand) {
    build_adjacency();
    std::vector<double> residual(m_ + n_);
    for (std::size_t i = 0; i < m_; ++i) residual[i] = supply[i];
    for (std::size_t j = 0; j < n_; ++j) residual[m_ + j] = demand[j];
    std::vector<std::size_t> degree(m_ + n_);
    for (std::size_t node = 0; node < m_ + n_; ++node) degree[node] = adjacency_[node].size();
    std::vector<char> used(m_ * n_, 0);
    std::deque<std::size_t> leaves;
    for (std::size_t node = 0; node < m_ + n_; ++node) {
      if (degree[node] == 1) leaves.push_back(node);
    }
    std::size_t assigned = 0;
    while (!leaves.empty() && assigned < basis_.size()) {
      const std::size_t node = leaves.front();
      leaves.pop_front();
      if (degree[node] != 1) continue;
      std::size_t cell = m_ * n_;
      for (std::size_t k : adjacency_[node]) {
        if (!used[k]) {
          cell = k;
          break;
        }
      }
      used[cell] = 1;
      ++assigned;
      flow_[cell] = residual[node];
      const std::size_t other = other_end(node, cell);
      residual[other] -= residual[node];
      residual[node] = 0.0;
      degree[node] = 0;
      if (--degree[other] == 1) leaves.push_back(other);
    }
  }

  void compute_potentials() {
    build_adjacency();
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t k : adjacency_[node]) {
        const std::size_t other = other_end(node, k);
        if (seen[other]) continue;
        seen[other] = 1;
        if (other >= m_) {
          v_[other - m_] = cost_[k] - u_[k / n_];
        } else {
          u_[other] = cost_[k] - v_[k % n_];
        }
        queue.push_back(other);
      }
    }
  }

  std::int64_t choose_entering(bool bland) const {
    std::int64_t best = -1;
    double best_rc = -tolerance_;
    for (std::size_t k = 0; k < m_ * n_; ++k) {
      if (in_basis_[k]) continue;
      const double rc = cost_[k] - u_[k / n_] - v_[k % n_];
      if (rc < best_rc) {
        best = static_cast<std::int64_t>(k);
        if (bland) return best;
        best_rc = rc;
      }
    }
    return best;
  }

  // Returns true for a degenerate (zero-step) pivot.
  bool pivot(std::size_t entering, std::span<const double> supply,
             std::span<const double> demand) {
    const std::size_t row = entering / n_;
    const std::size_t col = entering % n_;
    // Tree path from the column node to the row node.
    std::vector<std::size_t> parent_cell(m_ + n_, m_ * n_);
    std::vector<char> seen(m_ + n_, 0);
    std::deque<std::size_t> queue{m_ + col};
    seen[m_ + col] = 1;
    while (!queue.empty() && !seen[row]) {
      const std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t k : adjacency_[node]) {
        const std::size_t other = other_end(node, k);
        if (seen[other]) continue;
        seen[other] = 1;
        parent_cell[other] = k;
        queue.push_back(other);
      }
    }
    std::vector<std::size_t> path;  // from the row node back to the column node
    for (std::size_t node = row; node != m_ + col;) {
      const std::size_t k = parent_cell[node];
      path.push_back(k);
      node = other_end(node, k);
    }
    // Walking back from the row: cells alternate -, +, -, ... and the
    // entering cell is +.
    double theta = kInf;
    std::size_t leaving = m_ * n_;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const std::size_t k = path[p];
      if (flow_[k] < theta || (flow_[k] == theta && k < leaving)) {
        theta = flow_[k];
        leaving = k;
      }
    }
    in_basis_[leaving] = 0;
    in_basis_[entering] = 1;
    *std::find(basis_.begin(), basis_.end(), leaving) = entering;
    flow_[leaving] = 0.0;
    compute_flows(supply, demand);
    return theta <= kPositiveFlow;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  std::vector<double> cost_;
  std::vector<char> infinite_;
  double tolerance_ = 1e-12;

  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<double> flow_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::size_t pivots_ = 0;
};

}  // namespace

TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                std::span<const double> cost) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (cost.size() != m * n) {
    throw Error(ErrorKind::kValidation, "transport: cost matrix has wrong size", "cost");
  }

  // Blocks of active points connected through finite costs.
  UnionFind blocks(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    if (supply[i] <= 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (demand[j] > 0.0 && std::isfinite(cost[i * n + j])) blocks.unite(i, m + j);
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t node = 0; node < m + n; ++node) {
    const bool active = node < m ? supply[node] > 0.0 : demand[node - m] > 0.0;
    if (active && blocks.find(node) == node) roots.push_back(node);
  }

  TransportResult result;
  result.coupling.sources = m;
  result.coupling.targets = n;
  result.coupling.plan.assign(m * n, 0.0);
  result.duals.phi.assign(m, 0.0);
  result.duals.psi.assign(n, 0.0);

  for (std::size_t root : roots) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < m; ++i) {
      if (supply[i] > 0.0 && blocks.find(i) == root) rows.push_back(i);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (demand[j] > 0.0 && blocks.find(m + j) == root) cols.push_back(j);
    }
    std::vector<double> s(rows.size()), t(cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) s[r] = supply[rows[r]];
    for (std::size_t c = 0; c < cols.size(); ++c) t[c] = demand[cols[c]];
    const double total_s = std::accumulate(s.begin(), s.end(), 0.0);
    const double total_t = std::accumulate(t.begin(), t.end(), 0.0);
    if (rows.empty() || cols.empty() || std::abs(total_s - total_t) > kBalanceTolerance) {
      throw Error(ErrorKind::kInfeasible,
                  "transport: no finite-cost coupling (block masses " + std::to_string(total_s) +
                      " vs " + std::to_string(total_t) + ")");
    }
    std::vector<double> c(rows.size() * cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t q = 0; q < cols.size(); ++q) c[r * cols.size() + q] = cost[rows[r] * n + cols[q]];
    }

    BlockSimplex simplex(s, t, c);
    const std::size_t cap = 50 * rows.size() * cols.size() + 1000;
    if (!simplex.solve(s, t, cap)) {
      std::vector<double> ps(s), pt(t);
      double added = 0.0;
      for (std::size_t r = 0; r < ps.size(); ++r) {
        ps[r] += kPerturbation * static_cast<double>(r + 1);
        added += kPerturbation * static_cast<double>(r + 1);
      }
      pt.back() += added;
      BlockSimplex retry(s, t, c);
      if (!retry.solve(ps, pt, cap) || !retry.reflow(s, t)) {
        throw Error(ErrorKind::kNumericalDegeneracy, "transport: simplex failed to terminate");
      }
      simplex = std::move(retry);
      result.perturbed = true;
    }
    result.pivots += simplex.pivots();

    // Gauge: phi = 0 at the first source of the block.
    const double shift = simplex.u(0);
    UnionFind support(rows.size() + cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      result.duals.phi[rows[r]] = simplex.u(r) - shift;
      for (std::size_t q = 0; q < cols.size(); ++q) {
        const double f = simplex.flow(r, q);
        if (f > kPositiveFlow) {
          if (simplex.infinite(r, q)) {
            throw Error(ErrorKind::kInfeasible, "transport: no finite-cost coupling");
          }
          result.coupling.plan[rows[r] * n + cols[q]] = f;
          support.unite(r, rows.size() + q);
        }
      }
    }
    for (std::size_t q = 0; q < cols.size(); ++q) result.duals.psi[cols[q]] = simplex.v(q) + shift;
    const std::size_t first = support.find(0);
    for (std::size_t node = 1; node < rows.size() + cols.size(); ++node) {
      if (support.find(node) != first) result.degenerate_duals = true;
    }
  }

  // Potentials at massless points by c-transform, so feasibility holds
  // everywhere.
  for (std::size_t j = 0; j < n; ++j) {
    if (demand[j] > 0.0) continue;
    double best = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      const double c = cost[i * n + j];
      if (supply[i] > 0.0 && std::isfinite(c)) best = std::min(best, c - result.duals.phi[i]);
    }
    result.duals.psi[j] = std::isfinite(best) ? best : 0.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (supply[i] > 0.0) continue;
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = cost[i * n + j];
      if (std::isfinite(c)) best = std::min(best, c - result.duals.psi[j]);
    }
    result.duals.phi[i] = std::isfinite(best) ? best : 0.0;
  }

  double value = 0.0;
  for (std::size_t k = 0; k < m * n; ++k) {
    if (result.coupling.plan[k] > 0.0) value += result.coupling.plan[k] * cost[k];
  }
  result.value = value;
  return result;
}

namespace {

void check_pair(const JointDistribution& mu, const JointDistribution& nu, const GroundCost& cost) {
  if (mu.nx() != nu.nx() || mu.ny() != nu.ny() || cost.nx() != mu.nx() || cost.ny() != mu.ny()) {
    throw Error(ErrorKind::kValidation, "wasserstein_distance: alphabet mismatch");
  }
}

}  // namespace

TransportResult wasserstein_distance(const JointDistribution& mu, const JointDistribution& nu,
                                     const GroundCost& cost) {
  check_pair(mu, nu, cost);
  return solve_transport(mu.mass(), nu.mass(), cost.pairs());
}

double verify_duality(const Coupling& coupling, const DualPotentials& duals,
                      std::span<const double> cost) {
  const std::size_t m = coupling.sources;
  const std::size_t n = coupling.targets;
  if (duals.phi.size() != m || duals.psi.size() != n || cost.size() != m * n) {
    throw Error(ErrorKind::kValidation, "verify_duality: shape mismatch");
  }
  const auto rows = coupling.row_sums();
  const auto cols = coupling.column_sums();
  double primal = 0.0;
  double violation = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double c = cost[a * n + b];
      const double f = coupling.plan[a * n + b];
      if (f > 0.0) primal += f * c;
      if (std::isfinite(c)) violation = std::max(violation, duals.phi[a] + duals.psi[b] - c);
    }
  }
  double dual = 0.0;
  for (std::size_t a = 0; a < m; ++a) dual += duals.phi[a] * rows[a];
  for (std::size_t b = 0; b < n; ++b) dual += duals.psi[b] * cols[b];
  return std::abs(primal - dual) + violation;
}

double verify_duality(const Coupling& coupling, const DualPotentials& duals,
                      const GroundCost& cost) {
  return verify_duality(coupling, duals, cost.pairs());
}

}  // namespace robent::transport
