#include "robent/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace robent {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kSyntax: return "SyntaxError";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kNumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorKind::kEmptyFeasible: return "EmptyFeasible";
    case ErrorKind::kBisectionStall: return "BisectionStall";
    case ErrorKind::kNotConverged: return "NotConverged";
    case ErrorKind::kTooLarge: return "TooLarge";
  }
  return "Error";
}

namespace {

void check_dims(std::size_t nx, std::size_t ny, std::size_t size, std::size_t expected,
                const char* field) {
  if (nx == 0 || ny == 0) {
    throw Error(ErrorKind::kValidation, "alphabet sizes must be positive", field);
  }
  if (size != expected) {
    throw Error(ErrorKind::kValidation,
                std::string(field) + ": expected " + std::to_string(expected) +
                    " entries, got " + std::to_string(size),
                field);
  }
}

void check_entries(std::span<const double> values, const char* field) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::kValidation,
                  std::string(field) + ": entries must be finite and nonnegative", field);
    }
  }
}

void check_rows(std::span<const double> values, std::size_t width, const char* field) {
  for (std::size_t start = 0; start < values.size(); start += width) {
    double s = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      if (values[start + i] > 1.0 + kMassTolerance) {
        throw Error(ErrorKind::kValidation, std::string(field) + ": entry above 1", field);
      }
      s += values[start + i];
    }
    if (std::abs(s - 1.0) > kMassTolerance) {
      throw Error(ErrorKind::kValidation,
                  std::string(field) + ": row " + std::to_string(start / width) +
                      " does not sum to 1",
                  field);
    }
  }
}

double xlogx_over(double num, double den) {
  // -num * ln(num / den) with 0 ln 0 = 0
  return num > 0.0 ? -num * std::log(num / den) : 0.0;
}

}  // namespace

JointDistribution::JointDistribution(std::size_t nx, std::size_t ny, std::vector<double> mass)
    : nx_(nx), ny_(ny), mass_(std::move(mass)) {
  check_dims(nx_, ny_, mass_.size(), nx_ * ny_, "mu");
  check_entries(mass_, "mu");
  const double total = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorKind::kValidation,
                "mu: total mass " + std::to_string(total) + " is not 1", "mu");
  }
}

JointDistribution JointDistribution::normalized(std::size_t nx, std::size_t ny,
                                                std::vector<double> mass) {
  check_dims(nx, ny, mass.size(), nx * ny, "mu");
  for (double& v : mass) {
    if (!std::isfinite(v) || v < -1e-9) {
      throw Error(ErrorKind::kValidation, "mu: invalid computed mass", "mu");
    }
    v = std::max(v, 0.0);
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(std::abs(total - 1.0) < 1e-6)) {
    throw Error(ErrorKind::kValidation, "mu: computed mass far from normalized", "mu");
  }
  for (double& v : mass) v /= total;
  JointDistribution out;
  out.nx_ = nx;
  out.ny_ = ny;
  out.mass_ = std::move(mass);
  return out;
}

JointDistribution JointDistribution::uniform(std::size_t nx, std::size_t ny) {
  return normalized(nx, ny, std::vector<double>(nx * ny, 1.0 / static_cast<double>(nx * ny)));
}

DecisionRule::DecisionRule(std::size_t nx, std::size_t ny, std::vector<double> cond)
    : nx_(nx), ny_(ny), cond_(std::move(cond)) {
  check_dims(nx_, ny_, cond_.size(), nx_ * ny_, "q");
  check_entries(cond_, "q");
  check_rows(cond_, ny_, "q");
}

DecisionRule DecisionRule::uniform(std::size_t nx, std::size_t ny) {
  return DecisionRule(nx, ny, std::vector<double>(nx * ny, 1.0 / static_cast<double>(ny)));
}

Channel::Channel(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<double> cond)
    : nx_(nx), ny_(ny), nz_(nz), cond_(std::move(cond)) {
  if (nz_ == 0) throw Error(ErrorKind::kValidation, "channel: nz must be positive", "channel");
  check_dims(nx_, ny_, cond_.size(), nx_ * ny_ * nz_, "channel");
  check_entries(cond_, "channel");
  check_rows(cond_, nz_, "channel");
}

Channel Channel::identity(std::size_t nx, std::size_t ny) {
  std::vector<double> cond(nx * ny * nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) cond[point_index(x, y, ny) * nx + x] = 1.0;
  }
  return Channel(nx, ny, nx, std::move(cond));
}

const char* cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::kExplicit: return "explicit";
    case CostKind::kAbsoluteDifference: return "absolute-difference";
    case CostKind::kSquaredDifference: return "squared-difference";
    case CostKind::kHamming: return "hamming";
  }
  return "explicit";
}

CostKind parse_cost_kind(const std::string& name) {
  if (name == "explicit") return CostKind::kExplicit;
  if (name == "absolute-difference") return CostKind::kAbsoluteDifference;
  if (name == "squared-difference") return CostKind::kSquaredDifference;
  if (name == "hamming") return CostKind::kHamming;
  throw Error(ErrorKind::kValidation, "unknown cost kind '" + name + "'", "cost.kind");
}

namespace {

double builtin_distance(CostKind kind, std::size_t a, std::size_t b) {
  const double diff = std::abs(static_cast<double>(a) - static_cast<double>(b));
  switch (kind) {
    case CostKind::kAbsoluteDifference: return diff;
    case CostKind::kSquaredDifference: return diff * diff;
    case CostKind::kHamming: return a == b ? 0.0 : 1.0;
    case CostKind::kExplicit: break;
  }
  throw Error(ErrorKind::kValidation, "explicit cost has no built-in distance", "cost.kind");
}

std::vector<double> label_preserving_pairs(std::span<const double> base, std::size_t nx,
                                           std::size_t ny) {
  const std::size_t n = nx * ny;
  std::vector<double> pairs(n * n, kInf);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t z = 0; z < nx; ++z) {
        pairs[point_index(x, y, ny) * n + point_index(z, y, ny)] = base[x * nx + z];
      }
    }
  }
  return pairs;
}

}  // namespace

GroundCost GroundCost::make(CostKind kind, std::size_t nx, std::size_t ny, bool label_preserving) {
  if (kind == CostKind::kExplicit) {
    throw Error(ErrorKind::kValidation, "explicit cost requires a matrix", "cost.matrix");
  }
  if (nx == 0 || ny == 0) throw Error(ErrorKind::kValidation, "empty alphabet", "cost");
  GroundCost c;
  c.kind_ = kind;
  c.label_preserving_ = label_preserving;
  c.nx_ = nx;
  c.ny_ = ny;
  c.base_.resize(nx * nx);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nx; ++z) c.base_[x * nx + z] = builtin_distance(kind, x, z);
  }
  if (label_preserving) {
    c.pairs_ = label_preserving_pairs(c.base_, nx, ny);
  } else {
    const std::size_t n = nx * ny;
    c.pairs_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        c.pairs_[a * n + b] = builtin_distance(kind, a / ny, b / ny) +
                              builtin_distance(kind, a % ny, b % ny);
      }
    }
  }
  c.finish();
  return c;
}

GroundCost GroundCost::explicit_base(std::size_t nx, std::size_t ny, std::vector<double> base) {
  check_dims(nx, ny, base.size(), nx * nx, "cost.matrix");
  GroundCost c;
  c.kind_ = CostKind::kExplicit;
  c.label_preserving_ = true;
  c.nx_ = nx;
  c.ny_ = ny;
  for (double v : base) {
    if (std::isnan(v) || v < 0.0) {
      throw Error(ErrorKind::kValidation, "cost.matrix: entries must be >= 0", "cost.matrix");
    }
  }
  c.base_ = std::move(base);
  c.pairs_ = label_preserving_pairs(c.base_, nx, ny);
  c.finish();
  return c;
}

GroundCost GroundCost::explicit_pairs(std::size_t nx, std::size_t ny, std::vector<double> pairs) {
  check_dims(nx, ny, pairs.size(), nx * ny * nx * ny, "cost.matrix");
  GroundCost c;
  c.kind_ = CostKind::kExplicit;
  c.label_preserving_ = false;
  c.nx_ = nx;
  c.ny_ = ny;
  c.pairs_ = std::move(pairs);
  c.finish();
  return c;
}

void GroundCost::finish() {
  const std::size_t n = points();
  max_finite_ = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double v = pairs_[a * n + b];
      if (std::isnan(v) || v < 0.0 || v == -kInf) {
        throw Error(ErrorKind::kValidation, "cost.matrix: entries must be >= 0", "cost.matrix");
      }
      if (a == b && v != 0.0) {
        throw Error(ErrorKind::kValidation, "cost.matrix: diagonal must be 0", "cost.matrix");
      }
      if (std::isfinite(v)) max_finite_ = std::max(max_finite_, v);
    }
  }
}

double GroundCost::base(std::size_t x, std::size_t z) const {
  if (base_.empty()) {
    throw Error(ErrorKind::kValidation, "cost has no base distance over X", "cost");
  }
  return base_[x * nx_ + z];
}

std::vector<double> marginal_x(const JointDistribution& p) {
  std::vector<double> out(p.nx(), 0.0);
  for (std::size_t x = 0; x < p.nx(); ++x) {
    for (std::size_t y = 0; y < p.ny(); ++y) out[x] += p(x, y);
  }
  return out;
}

std::vector<double> marginal_y(const JointDistribution& p) {
  std::vector<double> out(p.ny(), 0.0);
  for (std::size_t x = 0; x < p.nx(); ++x) {
    for (std::size_t y = 0; y < p.ny(); ++y) out[y] += p(x, y);
  }
  return out;
}

Posterior posterior(const JointDistribution& p, ZeroMassPolicy /*policy*/) {
  const std::size_t nx = p.nx();
  const std::size_t ny = p.ny();
  const auto px = marginal_x(p);
  std::vector<double> cond(nx * ny);
  std::vector<bool> covered(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    covered[x] = px[x] > kSupportThreshold;
    for (std::size_t y = 0; y < ny; ++y) {
      cond[point_index(x, y, ny)] =
          covered[x] ? p(x, y) / px[x] : 1.0 / static_cast<double>(ny);
    }
  }
  return Posterior{DecisionRule(nx, ny, std::move(cond)), std::move(covered)};
}

double entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double v : dist) h += xlogx_over(v, 1.0);
  return h;
}

namespace kernels {

double conditional_entropy(std::span<const double> mass, std::size_t nx, std::size_t ny) {
  double h = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const auto row = mass.subspan(x * ny, ny);
    double px = 0.0;
    for (double v : row) px += v;
    if (px <= 0.0) continue;
    for (double v : row) h += xlogx_over(v, px);
  }
  return h;
}

}  // namespace kernels

double conditional_entropy(const JointDistribution& p) {
  const double h = kernels::conditional_entropy(p.mass(), p.nx(), p.ny());
  return std::max(h, 0.0);
}

double cross_entropy_loss(const JointDistribution& p, const DecisionRule& q) {
  if (p.nx() != q.nx() || p.ny() != q.ny()) {
    throw Error(ErrorKind::kValidation, "alphabet mismatch between p and q", "q");
  }
  double loss = 0.0;
  for (std::size_t x = 0; x < p.nx(); ++x) {
    for (std::size_t y = 0; y < p.ny(); ++y) {
      const double m = p(x, y);
      if (m <= 0.0) continue;
      const double qv = q(y, x);
      if (qv <= 0.0) return kInf;
      loss -= m * std::log(qv);
    }
  }
  return loss;
}

JointDistribution push_forward(const JointDistribution& mu, const Channel& k) {
  if (mu.nx() != k.nx() || mu.ny() != k.ny()) {
    throw Error(ErrorKind::kValidation, "alphabet mismatch between mu and channel", "channel");
  }
  const std::size_t ny = mu.ny();
  const std::size_t nz = k.nz();
  std::vector<double> out(nz * ny, 0.0);
  for (std::size_t x = 0; x < mu.nx(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double m = mu(x, y);
      if (m == 0.0) continue;
      for (std::size_t z = 0; z < nz; ++z) out[point_index(z, y, ny)] += m * k(z, x, y);
    }
  }
  return JointDistribution::normalized(nz, ny, std::move(out));
}

double expected_distortion(const JointDistribution& mu, const Channel& k, const GroundCost& cost) {
  if (mu.nx() != k.nx() || mu.ny() != k.ny() || cost.nx() != mu.nx() || k.nz() != mu.nx()) {
    throw Error(ErrorKind::kValidation, "alphabet mismatch in expected_distortion", "channel");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < mu.nx(); ++x) {
    for (std::size_t y = 0; y < mu.ny(); ++y) {
      const double m = mu(x, y);
      if (m == 0.0) continue;
      for (std::size_t z = 0; z < k.nz(); ++z) {
        const double w = k(z, x, y);
        if (w > 0.0) total += m * w * cost.base(x, z);
      }
    }
  }
  return total;
}

double mutual_information_yz(const JointDistribution& zy) {
  return entropy(marginal_y(zy)) - conditional_entropy(zy);
}

}  // namespace robent
