#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dio/export.hpp"
#include "dio/graph.hpp"
#include "dio/objective.hpp"
#include "dio/sim.hpp"
#include "json.hpp"

namespace dio {

/**
 * Self-contained experiment description, read from one JSON file:
 *
 *   {"name": ..., "graph": {"n", "edges"}, "agents": [{"f", "g", "x0"}...],
 *    "params": {"alpha", "beta1", "beta2", "c"}, "sim": {...},
 *    "output": {"prefix", "consensus_tol", "tail_fraction"}}
 */
struct Scenario {
  std::string name;
  Graph graph;
  std::vector<AgentSpec> agents;
  SimConfig sim;
  SummaryOptions summary;
  /// File-name stem of the artifacts.
  std::string prefix;

  /// Connectivity, strict feasibility of every x0, zero-sum kappa0.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Parses and validates. Malformed input raises ValidationError; semantic
/// failures keep their own kind (InfeasibleStart, DisconnectedGraph, ...).
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Copy with one of alpha, beta1, beta2, c, step replaced.
Scenario with_param(const Scenario& base, const std::string& name, double value);

struct RunOutcome {
  Trajectory trajectory;
  nlohmann::json summary;
  /// Set when the run stopped early; `trajectory` then holds the partial run.
  std::optional<std::string> error;
};

/// Simulates; a StepFailed is caught and reported through `error`.
RunOutcome run_scenario(const Scenario& scenario);

struct Artifacts {
  std::filesystem::path csv;
  std::filesystem::path summary;
  std::filesystem::path svg;
};

/// Writes <prefix>.csv, <prefix>_summary.json and <prefix>.svg into `dir`.
Artifacts write_artifacts(const Scenario& scenario, const RunOutcome& outcome,
                          const std::filesystem::path& dir);

struct SweepRow {
  std::string param;
  double value;
  bool ok;
  std::string error_kind;
  std::string error;
  /// Summary of the row's run; null when the row could not start.
  nlohmann::json summary;
};

/// One row per value, in order. Rows that fail (invalid value, StepFailed)
/// are recorded and the sweep moves on. Throws InvalidArgument for an
/// unknown parameter name.
std::vector<SweepRow> sweep(const Scenario& base, const std::string& param,
                            const std::vector<double>& values);

/// CSV table: param,value,status,completed,max_abs_err,spread,
/// tail_consensus_err,consensus_time,peak_constraint,error
std::string sweep_table_csv(const std::vector<SweepRow>& rows);

}  // namespace dio
