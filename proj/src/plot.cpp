#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json_util.hpp"

namespace robent::io {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 56.0;
constexpr int kTicks = 5;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const {
    return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

Frame frame_for(const std::vector<double>& xs, const SweepGrid& grid) {
  Frame f{xs.front(), xs.back(), kInf, -kInf};
  for (double v : grid.loss) {
    if (std::isfinite(v)) {
      f.y0 = std::min(f.y0, v);
      f.y1 = std::max(f.y1, v);
    }
  }
  for (double v : grid.h_star_curve) {
    if (std::isfinite(v)) {
      f.y0 = std::min(f.y0, v);
      f.y1 = std::max(f.y1, v);
    }
  }
  if (!(f.y0 <= f.y1)) f.y0 = 0.0, f.y1 = 1.0;
  if (f.x1 <= f.x0) f.x0 -= 0.5, f.x1 += 0.5;
  if (f.y1 - f.y0 < 1e-9) f.y0 -= 0.5, f.y1 += 0.5;
  const double pad = 0.04 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;
  return f;
}

void axes(std::ostringstream& out, const Frame& f, const std::string& title,
          const std::string& xlabel) {
  const double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;
  out << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth, 0) << "\" height=\"" << fixed(kHeight, 0)
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(kWidth / 2, 1) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  out << "<path d=\"M" << fixed(left, 1) << " " << fixed(top, 1) << " V" << fixed(bottom, 1) << " H"
      << fixed(right, 1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double t = static_cast<double>(i) / kTicks;
    const double xv = f.x0 + t * (f.x1 - f.x0), yv = f.y0 + t * (f.y1 - f.y0);
    const double x = f.px(xv), y = f.py(yv);
    out << "<line x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(bottom, 1) << "\" x2=\"" << fixed(x, 1)
        << "\" y2=\"" << fixed(bottom + 5, 1) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(bottom + 18, 1)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fixed(xv, 2)
        << "</text>\n";
    out << "<line x1=\"" << fixed(left - 5, 1) << "\" y1=\"" << fixed(y, 1) << "\" x2=\""
        << fixed(left, 1) << "\" y2=\"" << fixed(y, 1) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(left - 8, 1) << "\" y=\"" << fixed(y + 4, 1)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fixed(yv, 3)
        << "</text>\n";
  }
  out << "<text x=\"" << fixed((left + right) / 2, 1) << "\" y=\"" << fixed(kHeight - 14, 1)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << fixed((top + bottom) / 2, 1) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
      << fixed((top + bottom) / 2, 1) << ")\">loss (nats)</text>\n";
}

// Breaks the line at missing values.
void polyline(std::ostringstream& out, const Frame& f, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* color, bool dashed) {
  std::vector<std::pair<double, double>> run;
  const auto flush = [&]() {
    if (run.empty()) return;
    if (run.size() == 1) {
      out << "<circle cx=\"" << fixed(run[0].first, 2) << "\" cy=\"" << fixed(run[0].second, 2)
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << (dashed ? "2" : "1") << "\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
          << " points=\"";
      for (std::size_t i = 0; i < run.size(); ++i) {
        out << (i ? " " : "") << fixed(run[i].first, 2) << "," << fixed(run[i].second, 2);
      }
      out << "\"/>\n";
    }
    run.clear();
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) {
      flush();
      continue;
    }
    run.emplace_back(f.px(xs[i]), f.py(ys[i]));
  }
  flush();
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) +
         "\">\n";
}

}  // namespace

std::string write_sweep_csv(const SweepGrid& grid) {
  std::string out = "epsilon_attack,epsilon_rule,loss_nats,h_star_nats,converged\n";
  const std::size_t rules = grid.epsilon_rule.size();
  for (std::size_t a = 0; a < grid.epsilon_attack.size(); ++a) {
    for (std::size_t r = 0; r < rules; ++r) {
      out += shortest(grid.epsilon_attack[a]) + "," + shortest(grid.epsilon_rule[r]) + "," +
             shortest(grid.at(a, r)) + "," + shortest(grid.h_star_curve[a]) + "," +
             (grid.cell_converged[a * rules + r] ? "true" : "false") + "\n";
    }
  }
  return out;
}

Plots render_plots(const SweepGrid& grid) {
  const std::size_t na = grid.epsilon_attack.size(), nr = grid.epsilon_rule.size();
  Plots plots;
  {
    const Frame f = frame_for(grid.epsilon_rule, grid);
    std::ostringstream out;
    out << header();
    axes(out, f, "Loss as a function of decision rule", "epsilon_rule");
    for (std::size_t a = 0; a < na; ++a) {
      std::vector<double> ys(nr);
      for (std::size_t r = 0; r < nr; ++r) ys[r] = grid.at(a, r);
      polyline(out, f, grid.epsilon_rule, ys, kPalette[a % std::size(kPalette)], false);
    }
    out << "</svg>\n";
    plots.by_rule = out.str();
  }
  {
    const Frame f = frame_for(grid.epsilon_attack, grid);
    std::ostringstream out;
    out << header();
    axes(out, f, "Loss as a function of attack distortion", "epsilon_attack");
    for (std::size_t r = 0; r < nr; ++r) {
      std::vector<double> ys(na);
      for (std::size_t a = 0; a < na; ++a) ys[a] = grid.at(a, r);
      polyline(out, f, grid.epsilon_attack, ys, kPalette[r % std::size(kPalette)], false);
    }
    polyline(out, f, grid.epsilon_attack, grid.h_star_curve, "black", true);
    out << "</svg>\n";
    plots.by_attack = out.str();
  }
  return plots;
}

std::string toy_report_json(const ToyReport& r) {
  nlohmann::json j;
  j["h_star"] = r.h_star;
  j["alpha_hat"] = r.alpha_hat;
  j["det_maximin"] = r.det_maximin;
  j["det_minimax"] = r.det_minimax;
  j["saddle_gap"] = r.saddle_gap;
  j["fw_gap"] = r.fw_gap;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  nlohmann::json q = nlohmann::json::array();
  for (std::size_t x = 0; x < r.rule.nx(); ++x) q.push_back(detail::numbers_json(r.rule.row(x)));
  j["q_star"] = q;
  return j.dump(2) + "\n";
}

std::string fixed_point_json(const FixedPointReport& r) {
  nlohmann::json j;
  j["lambda"] = r.lambda;
  j["residual_standard"] = r.residual_standard;
  j["residual_uniform_variant"] = r.residual_uniform_variant;
  j["constant_standard"] = r.constant_standard;
  j["constant_uniform_variant"] = r.constant_uniform_variant;
  j["potential_gap_standard"] = r.potential_gap_standard;
  j["potential_gap_uniform_variant"] = r.potential_gap_uniform_variant;
  j["degenerate_duals"] = r.degenerate_duals;
  j["support_size"] = r.support_size;
  j["transport_value"] = r.transport_value;
  j["entropy"] = r.entropy;
  j["fw_gap"] = r.fw_gap;
  j["converged"] = r.converged;
  j["nu"] = detail::numbers_json(r.nu.mass());
  return j.dump(2) + "\n";
}

std::string counterexample_json(const std::vector<CounterexampleRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    j.push_back({{"n", r.n},
                 {"q_n_1_given_0", r.q_n_x0},
                 {"q_n_1_given_1", r.q_n_x1},
                 {"q_prime_n_1_given_0", r.q_prime_x0},
                 {"q_prime_n_1_given_1", r.q_prime_x1},
                 {"tv_p_n", r.tv_p},
                 {"tv_p_prime_n", r.tv_p_prime}});
  }
  return j.dump(2) + "\n";
}

std::string deterministic_json(const DeterministicAttackReport& r) {
  nlohmann::json j;
  j["maximin_value"] = r.maximin_value;
  j["minimax_value"] = r.minimax_value;
  j["stochastic_value"] = r.stochastic_value;
  return j.dump(2) + "\n";
}

std::string mechanism_json(const MechanismReport& r, double epsilon) {
  nlohmann::json j;
  j["epsilon"] = epsilon;
  j["leakage"] = r.leakage;
  j["mutual_information"] = r.mutual_information;
  j["distortion"] = r.distortion;
  j["h_star"] = r.h_star;
  j["fw_gap"] = r.fw_gap;
  j["converged"] = r.converged;
  j["nz"] = r.channel.nz();
  j["channel"] = detail::numbers_json(r.channel.values());
  return j.dump(2) + "\n";
}

}  // namespace robent::io
