#include "frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace robent::detail {

namespace {

constexpr int kGoldenIterations = 48;
constexpr int kRuleRounds = 64;
constexpr int kRecomputeEvery = 64;
constexpr double kDropWeight = 1e-12;
constexpr int kPolishSteps = 64;
constexpr int kNewtonIterations = 60;
constexpr double kTiny = 1e-300;

struct Atom {
  std::vector<Cell> cells;
  bool has_split = false;
  Split split;
  std::vector<double> base_marginal;
  double base_linear = 0.0;
  double split_linear = 0.0;  // linear change per unit theta
  std::vector<double> marginal;
  double linear = 0.0;
  double weight = 0.0;
  std::uint64_t hash = 0;

  void refresh() {
    marginal = base_marginal;
    linear = base_linear;
    if (has_split) {
      const double moved = split.theta * split.mass;
      marginal[split.from] -= moved;
      marginal[split.to] += moved;
      linear += split.theta * split_linear;
    }
  }
};

std::uint64_t hash_atom(const Atom& a) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (const Cell& c : a.cells) {
    mix(c.source);
    mix(c.target);
  }
  if (a.has_split) {
    mix(a.split.source + 1);
    mix(a.split.from);
    mix(a.split.to);
  }
  return h;
}

// Same atom up to the split share.
bool same_family(const Atom& a, const Atom& b) {
  if (a.hash != b.hash || a.has_split != b.has_split || a.cells.size() != b.cells.size()) {
    return false;
  }
  if (a.has_split && (a.split.source != b.split.source || a.split.from != b.split.from ||
                      a.split.to != b.split.to)) {
    return false;
  }
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (a.cells[i].source != b.cells[i].source || a.cells[i].target != b.cells[i].target ||
        a.cells[i].mass != b.cells[i].mass) {
      return false;
    }
  }
  return true;
}

class Engine {
 public:
  Engine(const FwProblem& problem, const SolverOptions& opts)
      : p_(problem), opts_(opts), points_(problem.nx * problem.ny),
        rule_(problem.empty_row_rule) {
    if (rule_.size() != points_) rule_.assign(points_, 1.0 / static_cast<double>(problem.ny));
    nu_.assign(points_, 0.0);
    for (std::size_t k = 0; k < problem.start.size(); ++k) {
      if (problem.start_weights[k] <= 0.0) continue;
      merge(make_atom(problem.start[k]), problem.start_weights[k]);
    }
    recompute();
  }

  FwResult run() {
    FwResult result;
    std::vector<double> g;
    Atom vertex;
    int stalls = 0;
    int t = 0;
    for (;; ++t) {
      const double current = objective(nu_, linear_);
      result.trace.push_back(current);
      const double gap = best_vertex(g, vertex, result.multiplier);
      result.gap = gap;
      if (gap <= opts_.fw_gap_tolerance) {
        result.converged = true;
        break;
      }
      if (t >= opts_.max_iterations) break;

      bool moved = false;
      if (opts_.line_search == LineSearch::kHarmonic) {
        moved = harmonic_step(vertex, t);
      } else {
        moved = mixture_step(current) || pairwise_step(g, vertex, current) ||
                frank_wolfe_step(vertex, current);
        if (moved) polish();
      }
      if (!moved && ++stalls > 3) break;
      if (moved) stalls = 0;
      if (atoms_.size() > 2 * compact_rows()) compact();
      if ((t + 1) % kRecomputeEvery == 0) recompute();
    }
    result.iterations = t;
    result.nu = nu_;
    result.rule = rule_;
    result.linear_term = linear_;
    result.objective = objective(nu_, linear_);
    result.coupling.assign(p_.sources * points_, 0.0);
    for (const Atom& a : atoms_) {
      for (const Cell& c : a.cells) result.coupling[c.source * points_ + c.target] += a.weight * c.mass;
      if (a.has_split) {
        const double moved = a.weight * a.split.theta * a.split.mass;
        result.coupling[a.split.source * points_ + a.split.from] -= moved;
        result.coupling[a.split.source * points_ + a.split.to] += moved;
      }
    }
    for (double& v : result.coupling) v = std::max(v, 0.0);
    return result;
  }

 private:
  double cell_cost(std::uint32_t source, std::uint32_t target) const {
    return p_.cost[source * points_ + target];
  }

  Atom make_atom(const Vertex& v) const {
    std::vector<Cell> cells = v.cells;
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
      return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    std::size_t kept = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (kept > 0 && cells[kept - 1].source == cells[i].source &&
          cells[kept - 1].target == cells[i].target) {
        cells[kept - 1].mass += cells[i].mass;
      } else {
        cells[kept++] = cells[i];
      }
    }
    cells.resize(kept);
    Atom atom;
    atom.base_marginal.assign(points_, 0.0);
    for (const Cell& c : cells) {
      atom.base_marginal[c.target] += c.mass;
      if (p_.kappa != 0.0 && c.mass > 0.0) atom.base_linear += c.mass * cell_cost(c.source, c.target);
    }
    atom.cells = std::move(cells);
    atom.has_split = v.has_split && v.split.from != v.split.to && v.split.mass > 0.0;
    if (atom.has_split) {
      atom.split = v.split;
      if (p_.kappa != 0.0) {
        atom.split_linear = v.split.mass * (cell_cost(v.split.source, v.split.to) -
                                            cell_cost(v.split.source, v.split.from));
      }
    }
    atom.hash = hash_atom(atom);
    atom.refresh();
    return atom;
  }

  // Adds weight w of `atom`; atoms of one family combine their split shares.
  void merge(const Atom& atom, double w) {
    auto range = index_.equal_range(atom.hash);
    for (auto it = range.first; it != range.second; ++it) {
      Atom& existing = atoms_[it->second];
      if (!same_family(existing, atom)) continue;
      if (existing.has_split) {
        const double total = existing.weight + w;
        existing.split.theta =
            total > 0.0 ? (existing.weight * existing.split.theta + w * atom.split.theta) / total
                        : atom.split.theta;
        existing.refresh();
      }
      existing.weight += w;
      return;
    }
    atoms_.push_back(atom);
    atoms_.back().weight = w;
    index_.emplace(atom.hash, atoms_.size() - 1);
  }

  void recompute() {
    std::vector<Atom> kept;
    for (Atom& a : atoms_) {
      if (a.weight > kDropWeight) kept.push_back(std::move(a));
    }
    double total = 0.0;
    for (const Atom& a : kept) total += a.weight;
    atoms_ = std::move(kept);
    index_.clear();
    std::fill(nu_.begin(), nu_.end(), 0.0);
    linear_ = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      atoms_[k].weight /= total;
      index_.emplace(atoms_[k].hash, k);
      for (std::size_t i = 0; i < points_; ++i) nu_[i] += atoms_[k].weight * atoms_[k].marginal[i];
      linear_ += atoms_[k].weight * atoms_[k].linear;
    }
  }

  std::size_t compact_rows() const { return points_ + (p_.kappa != 0.0 ? 2 : 1); }

  // Caratheodory reduction: atoms only matter through their marginal and
  // linear term, so any (rows + 1) of them are affinely dependent and one can
  // be eliminated without moving the iterate.
  void compact() {
    const std::size_t rows = compact_rows();
    const std::size_t cols = rows + 1;
    std::vector<double> m(rows * cols);
    std::vector<double> v(cols);
    while (atoms_.size() > rows) {
      for (std::size_t j = 0; j < cols; ++j) {
        const Atom& a = atoms_[atoms_.size() - cols + j];
        for (std::size_t i = 0; i < points_; ++i) m[i * cols + j] = a.marginal[i];
        m[points_ * cols + j] = 1.0;
        if (rows > points_ + 1) m[(points_ + 1) * cols + j] = a.linear;
      }
      if (!null_vector(m, rows, cols, v)) break;
      double t = kInf;
      std::size_t out = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (v[j] <= 0.0) continue;
        const double ratio = atoms_[atoms_.size() - cols + j].weight / v[j];
        if (ratio < t) {
          t = ratio;
          out = j;
        }
      }
      if (out == cols) break;
      for (std::size_t j = 0; j < cols; ++j) {
        double& w = atoms_[atoms_.size() - cols + j].weight;
        w = std::max(0.0, w - t * v[j]);
      }
      atoms_[atoms_.size() - cols + out].weight = 0.0;
      std::swap(atoms_[atoms_.size() - cols + out], atoms_.back());
      atoms_.pop_back();
    }
    recompute();
  }

  // Nonzero v with m v = 0 for a rows x (rows + 1) matrix; m is destroyed.
  static bool null_vector(std::vector<double>& m, std::size_t rows, std::size_t cols,
                          std::vector<double>& v) {
    std::vector<std::size_t> pivot_col;
    std::vector<char> is_pivot(cols, 0);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t best = r;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (std::abs(m[i * cols + c]) > std::abs(m[best * cols + c])) best = i;
      }
      if (std::abs(m[best * cols + c]) < 1e-13) continue;
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[r * cols + j], m[best * cols + j]);
      const double inv = 1.0 / m[r * cols + c];
      for (std::size_t j = 0; j < cols; ++j) m[r * cols + j] *= inv;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || m[i * cols + c] == 0.0) continue;
        const double f = m[i * cols + c];
        for (std::size_t j = 0; j < cols; ++j) m[i * cols + j] -= f * m[r * cols + j];
      }
      pivot_col.push_back(c);
      is_pivot[c] = 1;
      ++r;
    }
    std::size_t free_col = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!is_pivot[c]) {
        free_col = c;
        break;
      }
    }
    if (free_col == cols) return false;
    std::fill(v.begin(), v.end(), 0.0);
    v[free_col] = 1.0;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -m[k * cols + free_col];
    bool positive = false;
    for (double x : v) positive = positive || x > 0.0;
    if (!positive) {
      for (double& x : v) x = -x;
    }
    return true;
  }

  double objective(std::span<const double> nu, double linear) const {
    return kernels::conditional_entropy(nu, p_.nx, p_.ny) - p_.kappa * linear;
  }

  double value(std::span<const double> g, const Atom& a) const {
    double v = -p_.kappa * a.linear;
    for (std::size_t i = 0; i < points_; ++i) {
      if (a.marginal[i] != 0.0) v += g[i] * a.marginal[i];
    }
    return v;
  }

  // Directional derivative of the objective at nu toward w. On rows that
  // nu leaves empty it is the entropy of w's row, which no single linear
  // gradient reproduces; it is concave in w.
  double directional(std::span<const double> g, std::span<const double> w, double w_linear) const {
    double v = -p_.kappa * (w_linear - linear_);
    for (std::size_t x = 0; x < p_.nx; ++x) {
      double row = 0.0, mass = 0.0;
      for (std::size_t y = 0; y < p_.ny; ++y) {
        row += nu_[x * p_.ny + y];
        mass += w[x * p_.ny + y];
      }
      for (std::size_t y = 0; y < p_.ny; ++y) {
        const std::size_t i = x * p_.ny + y;
        if (row > 0.0) {
          v += g[i] * (w[i] - nu_[i]);
        } else if (w[i] > 0.0) {
          v -= w[i] * std::log(w[i] / mass);
        }
      }
    }
    return v;
  }

  bool has_empty_row() const {
    for (std::size_t x = 0; x < p_.nx; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < p_.ny; ++y) row += nu_[x * p_.ny + y];
      if (row <= 0.0) return true;
    }
    return false;
  }

  // Oracle vertex and FW gap. Rows the iterate leaves empty take their
  // gradient from a rule, and every rule gives a valid upper bound. When
  // such rows exist, an inner Frank-Wolfe over mixtures of oracle vertices
  // maximizes the directional derivative; its row shares are the next rule.
  // The smallest bound is kept, and the mixture is offered as a step.
  double best_vertex(std::vector<double>& g, Atom& vertex, double& multiplier) {
    mixture_.clear();
    std::vector<double> trial_g;
    solver_gradient(nu_, p_.nx, p_.ny, opts_.gradient_clamp, rule_, trial_g);
    const auto bound_at = [&](const Atom& atom) {
      double gap = value(trial_g, atom) + p_.kappa * linear_;
      for (std::size_t i = 0; i < points_; ++i) gap -= trial_g[i] * nu_[i];
      return gap;
    };
    Vertex v = p_.oracle(trial_g);
    vertex = make_atom(v);
    double best_gap = bound_at(vertex);
    g = trial_g;
    multiplier = v.multiplier;
    if (!has_empty_row()) return best_gap;

    std::vector<double> best_rule = rule_;
    std::vector<double> w = vertex.marginal;
    double w_linear = vertex.linear;
    mixture_.push_back({vertex, 1.0});
    std::vector<double> trial(points_);
    for (int round = 1; round < kRuleRounds; ++round) {
      if (best_gap <= 0.5 * opts_.fw_gap_tolerance) break;
      if (best_gap - directional(trial_g, w, w_linear) <= 0.25 * opts_.fw_gap_tolerance) break;
      for (std::size_t x = 0; x < p_.nx; ++x) {
        double row = 0.0, mass = 0.0;
        for (std::size_t y = 0; y < p_.ny; ++y) {
          row += nu_[x * p_.ny + y];
          mass += w[x * p_.ny + y];
        }
        if (row > 0.0 || mass <= 0.0) continue;
        for (std::size_t y = 0; y < p_.ny; ++y) rule_[x * p_.ny + y] = w[x * p_.ny + y] / mass;
      }
      solver_gradient(nu_, p_.nx, p_.ny, opts_.gradient_clamp, rule_, trial_g);
      v = p_.oracle(trial_g);
      Atom atom = make_atom(v);
      const double gap = bound_at(atom);
      if (gap < best_gap) {
        best_gap = gap;
        best_rule = rule_;
        g = trial_g;
        multiplier = v.multiplier;
        vertex = atom;
      }
      // Golden section on the segment from w to the new vertex.
      const double atom_linear = atom.linear;
      const auto phi = [&](double s) {
        for (std::size_t i = 0; i < points_; ++i) trial[i] = w[i] + s * (atom.marginal[i] - w[i]);
        return directional(trial_g, trial, w_linear + s * (atom_linear - w_linear));
      };
      const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = 0.0, b = 1.0, c = b - inv, d = inv;
      double fc = phi(c), fd = phi(d);
      for (int i = 0; i < kGoldenIterations; ++i) {
        if (fc >= fd) {
          b = d, d = c, fd = fc, c = b - inv * (b - a), fc = phi(c);
        } else {
          a = c, c = d, fc = fd, d = a + inv * (b - a), fd = phi(d);
        }
      }
      double step = 0.5 * (a + b);
      if (phi(1.0) >= phi(step)) step = 1.0;
      if (!(phi(step) > phi(0.0))) continue;
      for (std::size_t i = 0; i < points_; ++i) w[i] += step * (atom.marginal[i] - w[i]);
      w_linear += step * (atom_linear - w_linear);
      for (auto& [member, weight] : mixture_) weight *= 1.0 - step;
      mixture_.push_back({std::move(atom), step});
    }
    rule_ = std::move(best_rule);
    return best_gap;
  }

  // Line search toward the inner mixture from best_vertex.
  bool mixture_step(double current) {
    if (mixture_.size() < 2) return false;
    std::vector<double> dir(points_, 0.0);
    double dir_linear = -linear_;
    for (const auto& [atom, weight] : mixture_) {
      for (std::size_t i = 0; i < points_; ++i) dir[i] += weight * atom.marginal[i];
      dir_linear += weight * atom.linear;
    }
    for (std::size_t i = 0; i < points_; ++i) dir[i] -= nu_[i];
    const double s = line_search(dir, dir_linear, 1.0, current);
    if (s <= 0.0) return false;
    for (Atom& a : atoms_) a.weight *= (1.0 - s);
    for (const auto& [atom, weight] : mixture_) {
      if (weight > 0.0) merge(atom, s * weight);
    }
    if (s >= 1.0) {
      recompute();
      return true;
    }
    for (std::size_t i = 0; i < points_; ++i) nu_[i] = std::max(0.0, nu_[i] + s * dir[i]);
    linear_ += s * dir_linear;
    return true;
  }

  // Maximizes phi(s) = objective(nu + s * dir) on [0, smax] by golden section.
  double line_search(std::span<const double> dir, double dir_linear, double smax,
                     double current) {
    std::vector<double> trial(points_);
    auto phi = [&](double s) {
      for (std::size_t i = 0; i < points_; ++i) trial[i] = std::max(0.0, nu_[i] + s * dir[i]);
      return objective(trial, linear_ + s * dir_linear);
    };
    const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = smax;
    double c = b - inv * (b - a), d = a + inv * (b - a);
    double fc = phi(c), fd = phi(d);
    double best_s = 0.0;
    double best_value = current;
    auto consider = [&](double s, double f) {
      if (f > best_value) {
        best_value = f;
        best_s = s;
      }
    };
    consider(c, fc);
    consider(d, fd);
    for (int i = 0; i < kGoldenIterations; ++i) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv * (b - a);
        fc = phi(c);
        consider(c, fc);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv * (b - a);
        fd = phi(d);
        consider(d, fd);
      }
    }
    consider(smax, phi(smax));
    return best_s;
  }

  // First and second derivative of the objective along dir at step s.
  void derivatives(std::span<const double> dir, double dir_linear, double s, double& d1,
                   double& d2) const {
    d1 = -p_.kappa * dir_linear;
    d2 = 0.0;
    for (std::size_t x = 0; x < p_.nx; ++x) {
      double row = 0.0, row_dir = 0.0;
      for (std::size_t y = 0; y < p_.ny; ++y) {
        const std::size_t i = x * p_.ny + y;
        const double v = std::max(nu_[i] + s * dir[i], kTiny);
        row += v;
        row_dir += dir[i];
        if (dir[i] != 0.0) {
          d1 -= dir[i] * std::log(v);
          d2 -= dir[i] * dir[i] / v;
        }
      }
      if (row_dir != 0.0) {
        d1 += row_dir * std::log(row);
        d2 += row_dir * row_dir / row;
      }
    }
  }

  // Root of the derivative on [0, smax] by safeguarded Newton.
  double newton_search(std::span<const double> dir, double dir_linear, double smax) const {
    double d1 = 0.0, d2 = 0.0;
    derivatives(dir, dir_linear, 0.0, d1, d2);
    if (d1 <= 0.0) return 0.0;
    derivatives(dir, dir_linear, smax, d1, d2);
    if (d1 >= 0.0) return smax;
    double lo = 0.0, hi = smax, s = 0.5 * smax;
    for (int i = 0; i < kNewtonIterations; ++i) {
      derivatives(dir, dir_linear, s, d1, d2);
      if (d1 > 0.0) {
        lo = s;
      } else {
        hi = s;
      }
      double next = d2 < 0.0 ? s - d1 / d2 : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) <= 1e-15 * smax || hi - lo <= 1e-15 * smax) return next;
      s = next;
    }
    return s;
  }

  bool pairwise_step(std::span<const double> g, const Atom& vertex, double current,
                     bool newton = false) {
    std::size_t away = atoms_.size();
    double away_value = kInf;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (atoms_[k].weight <= 0.0) continue;
      const double v = value(g, atoms_[k]);
      if (v < away_value) {
        away_value = v;
        away = k;
      }
    }
    if (away == atoms_.size()) return false;
    std::vector<double> dir(points_);
    bool nonzero = false;
    for (std::size_t i = 0; i < points_; ++i) {
      dir[i] = vertex.marginal[i] - atoms_[away].marginal[i];
      nonzero = nonzero || dir[i] != 0.0;
    }
    const double dir_linear = vertex.linear - atoms_[away].linear;
    if (!nonzero && dir_linear == 0.0) return false;
    const double smax = atoms_[away].weight;
    const double s = newton ? newton_search(dir, dir_linear, smax)
                            : line_search(dir, dir_linear, smax, current);
    if (s <= 0.0) return false;
    atoms_[away].weight -= s;
    merge(vertex, s);
    if (atoms_[away].weight <= kDropWeight) {
      recompute();
    } else {
      for (std::size_t i = 0; i < points_; ++i) nu_[i] = std::max(0.0, nu_[i] + s * dir[i]);
      linear_ += s * dir_linear;
    }
    return true;
  }

  // Pairwise steps inside the active set, without oracle calls.
  void polish() {
    std::vector<double> g;
    for (int step = 0; step < kPolishSteps && atoms_.size() > 1; ++step) {
      solver_gradient(nu_, p_.nx, p_.ny, opts_.gradient_clamp, rule_, g);
      std::size_t hi = 0, lo = 0;
      double v_hi = -kInf, v_lo = kInf;
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (atoms_[k].weight <= 0.0) continue;
        const double v = value(g, atoms_[k]);
        if (v > v_hi) {
          v_hi = v;
          hi = k;
        }
        if (v < v_lo) {
          v_lo = v;
          lo = k;
        }
      }
      if (hi == lo || v_hi - v_lo <= 0.25 * opts_.fw_gap_tolerance) return;
      const Atom toward = atoms_[hi];
      if (!pairwise_step(g, toward, 0.0, true)) return;
    }
  }

  bool frank_wolfe_step(const Atom& vertex, double current) {
    std::vector<double> dir(points_);
    for (std::size_t i = 0; i < points_; ++i) dir[i] = vertex.marginal[i] - nu_[i];
    const double dir_linear = vertex.linear - linear_;
    const double s = line_search(dir, dir_linear, 1.0, current);
    if (s <= 0.0) return false;
    scale_in(vertex, s);
    return true;
  }

  bool harmonic_step(const Atom& vertex, int t) {
    scale_in(vertex, 2.0 / (static_cast<double>(t) + 2.0));
    return true;
  }

  void scale_in(const Atom& vertex, double s) {
    for (Atom& a : atoms_) a.weight *= (1.0 - s);
    merge(vertex, s);
    if (s >= 1.0) {
      recompute();
      return;
    }
    for (std::size_t i = 0; i < points_; ++i) nu_[i] = (1.0 - s) * nu_[i] + s * vertex.marginal[i];
    linear_ = (1.0 - s) * linear_ + s * vertex.linear;
  }

  const FwProblem& p_;
  const SolverOptions& opts_;
  std::size_t points_;
  std::vector<double> rule_;
  std::vector<std::pair<Atom, double>> mixture_;
  std::vector<Atom> atoms_;
  std::unordered_multimap<std::uint64_t, std::size_t> index_;
  std::vector<double> nu_;
  double linear_ = 0.0;
};

}  // namespace

void solver_gradient(std::span<const double> nu, std::size_t nx, std::size_t ny, double delta,
                     std::span<const double> empty_row_rule, std::vector<double>& out) {
  out.assign(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < ny; ++y) row += nu[x * ny + y];
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t i = x * ny + y;
      const double q = row > 0.0 ? nu[i] / row : empty_row_rule[i];
      out[i] = -std::log(std::max(q, delta));
    }
  }
}

Vertex routing_vertex(const transport::Routing& routing, std::span<const double> source_mass) {
  Vertex v;
  v.cells.reserve(source_mass.size());
  for (std::size_t a = 0; a < source_mass.size(); ++a) {
    const double m = source_mass[a];
    if (m <= 0.0) continue;
    const auto src = static_cast<std::uint32_t>(a);
    v.cells.push_back({src, routing.target[a], m});
    if (routing.split_source == static_cast<std::int64_t>(a) &&
        routing.split_target != routing.target[a] && routing.split_fraction > 0.0) {
      v.has_split = true;
      v.split = {src, routing.target[a], routing.split_target, m, routing.split_fraction};
    }
  }
  return v;
}

FwResult run_frank_wolfe(const FwProblem& problem, const SolverOptions& opts) {
  Engine engine(problem, opts);
  return engine.run();
}

}  // namespace robent::detail
