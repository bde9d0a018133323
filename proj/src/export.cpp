#include "dio/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dio/analysis.hpp"

namespace dio {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  const int n = trajectory.agents;
  std::ostringstream out;
  out << 't';
  for (int i = 0; i < n; ++i) out << ",x_" << i;
  for (int i = 0; i < n; ++i) out << ",u_" << i;
  out << ",consensus_err,centrality_residual,kappa_drift,omega0\n";
  for (const auto& s : trajectory.samples) {
    out << format_number(s.t);
    for (int i = 0; i < n; ++i) out << ',' << format_number(s.x(i));
    for (int i = 0; i < n; ++i) out << ',' << format_number(s.u(i));
    out << ',' << format_number(s.consensus_err) << ','
        << format_number(s.centrality_residual) << ','
        << format_number(s.kappa_drift) << ',' << format_number(s.omega0) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json optional_number(std::optional<double> v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

double peak_constraint(const std::vector<AgentSpec>& specs,
                       const Eigen::VectorXd& x) {
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].g) peak = std::max(peak, specs[i].g->value(x(i)));
  }
  return peak;
}

}  // namespace

nlohmann::json summarize(const Trajectory& trajectory,
                         const std::vector<AgentSpec>& specs, const Graph& graph,
                         const SimConfig& config, const SummaryOptions& options) {
  nlohmann::json j;
  const auto& fin = trajectory.final_state;
  j["mode"] = to_string(trajectory.mode);
  j["completed"] = trajectory.completed;
  j["t_final"] = fin.t;
  j["steps"] = trajectory.steps;
  j["backoffs"] = trajectory.backoffs;
  j["min_step_used"] = trajectory.min_step_used;
  j["signal_rate_sup"] = trajectory.signal_rate_sup;
  j["gain_warning"] = trajectory.gain_warning;
  j["params"] = config.params.to_json();
  j["sim"] = config.to_json();

  std::vector<double> x_final(fin.x.data(), fin.x.data() + fin.x.size());
  j["x_final"] = x_final;
  j["spread"] = fin.x.size() ? fin.x.maxCoeff() - fin.x.minCoeff() : 0.0;

  std::optional<double> x_star;
  try {
    x_star = solve_constrained(specs).x_star;
  } catch (const EmptyFeasibleSet&) {
  }
  j["x_star"] = optional_number(x_star);
  if (x_star && fin.x.size()) {
    std::vector<double> err;
    for (Eigen::Index i = 0; i < fin.x.size(); ++i) {
      err.push_back(std::abs(fin.x(i) - *x_star));
    }
    j["abs_err"] = err;
    j["max_abs_err"] = *std::max_element(err.begin(), err.end());
  } else {
    j["abs_err"] = nullptr;
    j["max_abs_err"] = nullptr;
  }

  // Feasibility and drift over everything recorded, plus the final state.
  double peak = -std::numeric_limits<double>::infinity();
  double drift = 0.0;
  for (const auto& s : trajectory.samples) {
    peak = std::max(peak, peak_constraint(specs, s.x));
    drift = std::max(drift, s.kappa_drift);
  }
  if (fin.x.size()) peak = std::max(peak, peak_constraint(specs, fin.x));
  j["peak_constraint"] = std::isfinite(peak) ? nlohmann::json(peak) : nlohmann::json(nullptr);
  j["feasible"] = !(peak >= 0.0);
  j["max_kappa_drift"] = drift;

  const auto consensus_time = detect_consensus_time(trajectory, options.consensus_tol);
  j["consensus_tol"] = options.consensus_tol;
  j["consensus_time"] = optional_number(consensus_time);

  const auto& samples = trajectory.samples;
  double tail_err = 0.0;
  if (!samples.empty()) {
    const auto first = static_cast<std::size_t>(
        std::floor((1.0 - options.tail_fraction) * static_cast<double>(samples.size())));
    for (std::size_t k = std::min(first, samples.size() - 1); k < samples.size(); ++k) {
      tail_err = std::max(tail_err, samples[k].consensus_err);
    }
  }
  j["tail_consensus_err"] = tail_err;

  std::optional<double> omega0;
  if (consensus_time) {
    double w = 0.0;
    for (const auto& s : samples) {
      if (s.t >= *consensus_time) w = std::max(w, s.omega0);
    }
    omega0 = w;
  }
  j["omega0_post_consensus"] = optional_number(omega0);
  std::optional<double> radius;
  if (omega0 && graph.size() >= 2) {
    try {
      radius = practical_consensus_radius(graph, config.params.beta1(),
                                          config.params.beta2(), *omega0,
                                          graph.size());
    } catch (const GainConditionViolated&) {
    }
  }
  j["consensus_radius"] = optional_number(radius);
  j["lambda2"] = graph.size() >= 2 ? nlohmann::json(graph.algebraic_connectivity())
                                   : nlohmann::json(nullptr);
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace dio
