#include "dio/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "dio/svg_plot.hpp"

namespace dio {

namespace {

const std::vector<std::string> kSweepParams = {"alpha", "beta1", "beta2", "c", "step"};

std::string cell(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return "";
  const auto& v = j.at(key);
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return format_number(v.get<double>());
  return v.dump();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void Scenario::validate() const {
  sim.validate();
  const int n = graph.size();
  if (static_cast<int>(agents.size()) != n) {
    throw ValidationError("scenario has " + std::to_string(agents.size()) +
                          " agents but the graph has " + std::to_string(n) +
                          " nodes");
  }
  if (n >= 2 && !graph.is_connected()) {
    throw DisconnectedGraph("communication graph is not connected");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    try {
      agents[i].validate();
    } catch (const InfeasibleStart& e) {
      throw InfeasibleStart("agent " + std::to_string(i) + ": " + e.what());
    }
  }
  if (sim.kappa0) {
    const auto& k = *sim.kappa0;
    if (k.rows() != n) throw ValidationError("kappa0 must have one row per agent");
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if (k.colwise().sum().cwiseAbs().maxCoeff() > 1e-9 * scale * n) {
      throw ValidationError("kappa0 columns must sum to zero");
    }
  }
  if (!(summary.consensus_tol > 0.0)) {
    throw ValidationError("consensus_tol must be positive");
  }
  if (!(summary.tail_fraction > 0.0 && summary.tail_fraction <= 1.0)) {
    throw ValidationError("tail_fraction must lie in (0, 1]");
  }
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json agents_json = nlohmann::json::array();
  for (const auto& a : agents) agents_json.push_back(a.to_json());
  nlohmann::json g;
  dio::to_json(g, graph);
  return {{"name", name},
          {"graph", g},
          {"agents", agents_json},
          {"params", sim.params.to_json()},
          {"sim", sim.to_json()},
          {"output",
           {{"prefix", prefix},
            {"consensus_tol", summary.consensus_tol},
            {"tail_fraction", summary.tail_fraction}}}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
  for (const char* key : {"graph", "agents", "params"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("scenario is missing \"") + key + "\"");
    }
  }
  try {
    const std::string name = j.value("name", std::string("scenario"));
    Graph graph = graph_from_json(j.at("graph"));
    std::vector<AgentSpec> agents = agents_from_json(j.at("agents"));
    const BarrierParams params = BarrierParams::from_json(j.at("params"));
    SimConfig sim = SimConfig::from_json(j.value("sim", nlohmann::json::object()), params);
    SummaryOptions summary;
    std::string prefix = name;
    if (j.contains("output")) {
      const auto& o = j.at("output");
      summary.consensus_tol = o.value("consensus_tol", summary.consensus_tol);
      summary.tail_fraction = o.value("tail_fraction", summary.tail_fraction);
      prefix = o.value("prefix", prefix);
    }
    if (prefix.empty() || prefix.find('/') != std::string::npos) {
      throw ValidationError("output prefix must be a plain file name");
    }
    Scenario s{name, std::move(graph), std::move(agents), std::move(sim),
               summary, prefix};
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scenario: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read scenario " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("scenario " + path.string() + " is not valid JSON: " +
                          e.what());
  }
  return scenario_from_json(j);
}

Scenario with_param(const Scenario& base, const std::string& name, double value) {
  if (std::find(kSweepParams.begin(), kSweepParams.end(), name) == kSweepParams.end()) {
    throw InvalidArgument("cannot sweep \"" + name +
                          "\"; expected alpha, beta1, beta2, c or step");
  }
  Scenario s = base;
  if (name == "step") {
    s.sim.step = value;
    s.sim.validate();
  } else {
    s.sim.params = base.sim.params.with(name, value);
  }
  return s;
}

RunOutcome run_scenario(const Scenario& scenario) {
  scenario.validate();
  RunOutcome out;
  try {
    out.trajectory = run(scenario.sim, scenario.agents, scenario.graph);
  } catch (const StepFailed& e) {
    out.trajectory = e.partial();
    out.error = e.what();
  }
  out.summary = summarize(out.trajectory, scenario.agents, scenario.graph,
                          scenario.sim, scenario.summary);
  out.summary["name"] = scenario.name;
  if (out.error) out.summary["error"] = {{"kind", "StepFailed"}, {"message", *out.error}};
  return out;
}

Artifacts write_artifacts(const Scenario& scenario, const RunOutcome& outcome,
                          const std::filesystem::path& dir) {
  Artifacts a{dir / (scenario.prefix + ".csv"),
              dir / (scenario.prefix + "_summary.json"),
              dir / (scenario.prefix + ".svg")};
  write_text_file(a.csv, trajectory_csv(outcome.trajectory));
  write_text_file(a.summary, outcome.summary.dump(2) + "\n");
  std::optional<double> ref;
  if (outcome.summary.contains("x_star") && outcome.summary["x_star"].is_number()) {
    ref = outcome.summary["x_star"].get<double>();
  }
  write_text_file(a.svg, trajectory_svg(outcome.trajectory,
                                        scenario.name + ": agent trajectories", ref));
  return a;
}

std::vector<SweepRow> sweep(const Scenario& base, const std::string& param,
                            const std::vector<double>& values) {
  if (std::find(kSweepParams.begin(), kSweepParams.end(), param) == kSweepParams.end()) {
    throw InvalidArgument("cannot sweep \"" + param +
                          "\"; expected alpha, beta1, beta2, c or step");
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SweepRow row{param, v, false, "", "", nullptr};
    try {
      const Scenario s = with_param(base, param, v);
      RunOutcome out = run_scenario(s);
      row.summary = std::move(out.summary);
      if (out.error) {
        row.error_kind = "StepFailed";
        row.error = *out.error;
      } else {
        row.ok = true;
      }
    } catch (const Error& e) {
      row.error_kind = std::string(to_string(e.kind()));
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_table_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "param,value,status,completed,max_abs_err,spread,tail_consensus_err,"
      "consensus_time,peak_constraint,error\n";
  for (const auto& r : rows) {
    out += r.param + ',' + format_number(r.value) + ',' +
           (r.ok ? "ok" : (r.error_kind.empty() ? "failed" : r.error_kind)) + ',' +
           cell(r.summary, "completed") + ',' + cell(r.summary, "max_abs_err") + ',' +
           cell(r.summary, "spread") + ',' + cell(r.summary, "tail_consensus_err") +
           ',' + cell(r.summary, "consensus_time") + ',' +
           cell(r.summary, "peak_constraint") + ',' + csv_quote(r.error) + '\n';
  }
  return out;
}

}  // namespace dio
