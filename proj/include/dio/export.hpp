#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dio/graph.hpp"
#include "dio/objective.hpp"
#include "dio/sim.hpp"
#include "json.hpp"

namespace dio {

/// Shortest round-trip-stable text for CSV cells ("%.12g"; nan/inf spelled out).
std::string format_number(double v);

/// Header t,x_0..,u_0..,consensus_err,centrality_residual,kappa_drift,omega0
/// followed by one row per sample.
std::string trajectory_csv(const Trajectory& trajectory);

struct SummaryOptions {
  /// Estimate spread below which the estimator counts as agreed.
  double consensus_tol = 1e-6;
  /// Fraction of trailing samples used for tail statistics.
  double tail_fraction = 0.2;
};

/**
 * Summary of a (possibly partial) run: final positions, distance to the
 * constrained optimum, spread, detected estimator agreement time, peak
 * constraint value and feasibility over all recorded samples, tail consensus
 * error and the ultimate-bound radius evaluated at the post-agreement omega0.
 */
nlohmann::json summarize(const Trajectory& trajectory,
                         const std::vector<AgentSpec>& specs, const Graph& graph,
                         const SimConfig& config,
                         const SummaryOptions& options = {});

/// Writes `text` to `path`, creating parent directories. Throws Error on I/O
/// failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dio
