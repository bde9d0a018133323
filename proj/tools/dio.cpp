// Command-line front end: simulate, sweep and oracle over scenario files.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dio/analysis.hpp"
#include "dio/scenario.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(dio::ErrorKind kind) {
  switch (kind) {
    case dio::ErrorKind::kInvalidArgument:
    case dio::ErrorKind::kValidation:
    case dio::ErrorKind::kInfeasibleStart:
    case dio::ErrorKind::kDisconnectedGraph:
    case dio::ErrorKind::kEmptyFeasibleSet:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

int report(std::string_view kind, const std::string& message, int code) {
  nlohmann::json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw dio::ValidationError("bad sweep value \"" + item + "\"");
    values.push_back(v);
  }
  return values;
}

nlohmann::json oracle_json(const dio::OracleResult& r) {
  return {{"x_star", r.x_star}, {"value", r.value}, {"active", r.active},
          {"iterations", r.iterations}};
}

int cmd_simulate(const std::string& path, const std::string& mode,
                 const std::string& estimator, const std::string& out_dir) {
  dio::Scenario s = dio::load_scenario(path);
  if (!mode.empty()) s.sim.mode = dio::mode_from_string(mode);
  if (!estimator.empty()) s.sim.estimator = dio::estimator_scheme_from_string(estimator);
  const dio::RunOutcome out = dio::run_scenario(s);
  const dio::Artifacts a = dio::write_artifacts(s, out, out_dir);
  nlohmann::json j = out.summary;
  j["artifacts"] = {{"csv", a.csv.string()},
                    {"summary", a.summary.string()},
                    {"svg", a.svg.string()}};
  std::cout << j.dump(2) << '\n';
  if (out.error) return report("StepFailed", *out.error, kExitRuntime);
  return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& param,
              const std::string& values_text, const std::string& out_dir) {
  const dio::Scenario s = dio::load_scenario(path);
  const std::vector<double> values = parse_values(values_text);
  const auto rows = dio::sweep(s, param, values);
  const std::string table = dio::sweep_table_csv(rows);
  const auto table_path =
      std::filesystem::path(out_dir) / (s.prefix + "_sweep_" + param + ".csv");
  dio::write_text_file(table_path, table);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].summary.is_null()) continue;
    dio::write_text_file(std::filesystem::path(out_dir) /
                             (s.prefix + "_sweep_" + param + "_" +
                              std::to_string(k) + "_summary.json"),
                         rows[k].summary.dump(2) + "\n");
  }
  std::cout << table;
  return kExitOk;
}

int cmd_oracle(const std::string& path, const std::string& taus_text) {
  const dio::Scenario s = dio::load_scenario(path);
  const auto box = dio::feasible_interval(s.agents);
  nlohmann::json j;
  j["feasible_interval"] = {box.lo, box.hi};
  j["constrained"] = oracle_json(dio::solve_constrained(s.agents));
  j["barrier"] = nlohmann::json::array();
  for (double tau : parse_values(taus_text)) {
    auto entry = oracle_json(dio::solve_barrier(s.agents, s.sim.params.alpha(), tau));
    entry["tau"] = tau;
    j["barrier"].push_back(entry);
  }
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed interior-point optimization simulator"};
  app.require_subcommand(1);

  std::string path, mode, estimator, out_dir = "out", param, values, taus = "10,100,1000,1e6";

  auto* sim = app.add_subcommand("simulate", "Run one scenario and write CSV, JSON and SVG");
  sim->add_option("scenario", path, "Scenario JSON file")->required();
  sim->add_option("--mode", mode, "Override the protocol")
      ->check(CLI::IsMember({"centralized", "distributed"}));
  sim->add_option("--estimator", estimator, "Override the estimator discretization")
      ->check(CLI::IsMember({"implicit", "explicit"}));
  sim->add_option("--out", out_dir, "Output directory");

  auto* sw = app.add_subcommand("sweep", "Re-run a scenario over values of one gain");
  sw->add_option("scenario", path, "Scenario JSON file")->required();
  sw->add_option("--param", param, "alpha, beta1, beta2, c or step")->required();
  sw->add_option("--values", values, "Comma-separated values")->required();
  sw->add_option("--out", out_dir, "Output directory");

  auto* orc = app.add_subcommand("oracle", "Print the reference solutions");
  orc->add_option("scenario", path, "Scenario JSON file")->required();
  orc->add_option("--tau", taus, "Comma-separated barrier parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report("UsageError", e.what(), kExitValidation);
  }

  try {
    if (*sim) return cmd_simulate(path, mode, estimator, out_dir);
    if (*sw) return cmd_sweep(path, param, values, out_dir);
    return cmd_oracle(path, taus);
  } catch (const dio::Error& e) {
    return report(dio::to_string(e.kind()), e.what(), exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    return report("InternalError", e.what(), kExitRuntime);
  }
}
