#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dio/scenario.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using dio::test::data_path;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dio_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>& header) {
  std::stringstream in(text);
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Scenario, Path4FileLoads) {
  const auto s = dio::test::path4_scenario();
  EXPECT_EQ(s.graph.size(), 4);
  EXPECT_EQ(s.agents.size(), 4u);
  EXPECT_FALSE(s.agents[3].g.has_value());
  EXPECT_EQ(s.prefix, "path4_example");
  const auto back = dio::scenario_from_json(s.to_json());
  EXPECT_EQ(back.graph.edges(), s.graph.edges());
  EXPECT_DOUBLE_EQ(back.sim.params.alpha(), s.sim.params.alpha());
  EXPECT_EQ(back.sim.record_every, s.sim.record_every);
}

TEST(Scenario, ValidationErrors) {
  EXPECT_THROW(dio::load_scenario(data_path("infeasible_start.json")), dio::InfeasibleStart);
  EXPECT_THROW(dio::load_scenario(data_path("disconnected.json")), dio::DisconnectedGraph);
  EXPECT_THROW(dio::load_scenario(data_path("malformed.json")), dio::ValidationError);
  EXPECT_THROW(dio::load_scenario(data_path("missing.json")), dio::ValidationError);

  auto j = dio::test::path4_scenario().to_json();
  j["params"]["alpha"] = 1.0;
  EXPECT_THROW(dio::scenario_from_json(j), dio::ValidationError);
  j = dio::test::path4_scenario().to_json();
  j.erase("agents");
  EXPECT_THROW(dio::scenario_from_json(j), dio::ValidationError);
  j = dio::test::path4_scenario().to_json();
  j["agents"].erase(0);
  EXPECT_THROW(dio::scenario_from_json(j), dio::ValidationError);
  j = dio::test::path4_scenario().to_json();
  j["sim"]["kappa0"] = {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  EXPECT_THROW(dio::scenario_from_json(j), dio::ValidationError);
  j["sim"]["kappa0"] = {{1, 0, 0}, {-1, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  EXPECT_NO_THROW(dio::scenario_from_json(j));
  j = dio::test::path4_scenario().to_json();
  j["output"]["prefix"] = "../escape";
  EXPECT_THROW(dio::scenario_from_json(j), dio::ValidationError);
}

TEST(Scenario, WithParam) {
  const auto s = dio::test::path4_scenario();
  EXPECT_DOUBLE_EQ(dio::with_param(s, "beta2", 20).sim.params.beta2(), 20);
  EXPECT_DOUBLE_EQ(dio::with_param(s, "step", 5e-4).sim.step, 5e-4);
  EXPECT_THROW(dio::with_param(s, "gamma", 1), dio::InvalidArgument);
  EXPECT_THROW(dio::with_param(s, "step", -1), dio::InvalidArgument);
  EXPECT_THROW(dio::with_param(s, "alpha", 0.5), dio::InvalidArgument);
}

TEST(Scenario, CsvLayoutAndDeterminism) {
  const auto s = dio::load_scenario(data_path("two_agents.json"));
  const auto a = dio::run_scenario(s);
  const auto b = dio::run_scenario(s);
  const std::string csv = dio::trajectory_csv(a.trajectory);
  EXPECT_EQ(csv, dio::trajectory_csv(b.trajectory));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,x_0,x_1,u_0,u_1,consensus_err,centrality_residual,kappa_drift,omega0");

  const fs::path dir = fresh_dir("determinism");
  const auto art1 = dio::write_artifacts(s, a, dir / "one");
  const auto art2 = dio::write_artifacts(s, b, dir / "two");
  EXPECT_EQ(slurp(art1.csv), slurp(art2.csv));
  EXPECT_TRUE(fs::exists(art1.summary));
  const std::string svg = slurp(art1.svg);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

// The summary's feasibility claim agrees with a re-scan of the CSV.
TEST(Scenario, FeasibilityFlagMatchesCsv) {
  for (const auto& name : {"two_agents.json"}) {
    const auto s = dio::load_scenario(data_path(name));
    const auto out = dio::run_scenario(s);
    std::vector<std::string> header;
    const auto rows = parse_csv(dio::trajectory_csv(out.trajectory), header);
    ASSERT_EQ(rows.size(), out.trajectory.samples.size());
    double peak = -1e300;
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < s.agents.size(); ++i) {
        if (s.agents[i].g) peak = std::max(peak, s.agents[i].g->value(r[1 + i]));
      }
    }
    EXPECT_EQ(out.summary["feasible"].get<bool>(), peak < 0.0);
    EXPECT_NEAR(out.summary["peak_constraint"].get<double>(), peak, 1e-9);
  }
}

TEST(Scenario, CentralizedMatchesDistributed) {
  auto s = dio::test::path4_scenario();
  const auto dist = dio::run_scenario(s);
  s.sim.mode = dio::Mode::kCentralized;
  const auto cent = dio::run_scenario(s);
  ASSERT_FALSE(dist.error);
  ASSERT_FALSE(cent.error);
  const double delta0 = dist.summary["consensus_radius"].get<double>();
  EXPECT_LE((dist.trajectory.final_state.x - cent.trajectory.final_state.x).cwiseAbs().maxCoeff(),
            2 * delta0);
}

TEST(Sweep, EmptyListGivesEmptyTable) {
  const auto rows = dio::sweep(dio::test::path4_scenario(), "c", {});
  EXPECT_TRUE(rows.empty());
  const std::string table = dio::sweep_table_csv(rows);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1);
  EXPECT_THROW(dio::sweep(dio::test::path4_scenario(), "gamma", {1.0}), dio::InvalidArgument);
}

TEST(Sweep, RowFailuresAreRecorded) {
  auto s = dio::load_scenario(data_path("two_agents.json"));
  s.sim.t_end = 0.5;
  const auto rows = dio::sweep(s, "alpha", {0.5, 3.0});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].ok);
  EXPECT_EQ(rows[0].error_kind, "InvalidArgument");
  EXPECT_TRUE(rows[0].summary.is_null());
  EXPECT_TRUE(rows[1].ok);
  const std::string table = dio::sweep_table_csv(rows);
  EXPECT_NE(table.find("alpha,0.5,InvalidArgument"), std::string::npos);
  EXPECT_NE(table.find("alpha,3,ok,true"), std::string::npos);
}

TEST(Sweep, StepFailureIsARowNotAnAbort) {
  auto s = dio::test::path4_scenario();
  s.sim.t_end = 2.0;
  s.sim.params = dio::BarrierParams(2, 2, 10, 50);
  const auto rows = dio::sweep(s, "c", {50});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].ok);
  EXPECT_EQ(rows[0].error_kind, "StepFailed");
  EXPECT_FALSE(rows[0].summary["completed"].get<bool>());
  EXPECT_TRUE(rows[0].summary["feasible"].get<bool>());
}

// A larger beta2 tightens the ultimate bound, so the tail consensus error
// should fall strictly.
TEST(Sweep, TailConsensusErrorFallsWithBeta2) {
  const auto rows = dio::sweep(dio::test::path4_scenario(), "beta2", {1, 10, 100});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) ASSERT_TRUE(r.ok) << r.error;
  const double e1 = rows[0].summary["tail_consensus_err"].get<double>();
  const double e10 = rows[1].summary["tail_consensus_err"].get<double>();
  const double e100 = rows[2].summary["tail_consensus_err"].get<double>();
  EXPECT_GT(e1, e10);
  EXPECT_GT(e10, e100);
}

TEST(Sweep, AgreementTimeDoesNotGrowWithC) {
  const auto rows = dio::sweep(dio::test::path4_scenario(), "c", {10, 50});
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_TRUE(rows[0].ok && rows[1].ok);
  ASSERT_TRUE(rows[0].summary["consensus_time"].is_number());
  ASSERT_TRUE(rows[1].summary["consensus_time"].is_number());
  EXPECT_LE(rows[1].summary["consensus_time"].get<double>(),
            rows[0].summary["consensus_time"].get<double>());
}
