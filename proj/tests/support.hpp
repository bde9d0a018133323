#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dio/graph.hpp"
#include "dio/objective.hpp"
#include "dio/scenario.hpp"

namespace dio::test {

inline std::string scenario_path(const std::string& name) {
  return std::string(DIO_SOURCE_DIR) + "/scenarios/" + name;
}

inline std::string data_path(const std::string& name) {
  return std::string(DIO_SOURCE_DIR) + "/tests/data/" + name;
}

inline Scenario path4_scenario() { return load_scenario(scenario_path("path4_example.json")); }

// Four agents on a path, f = (x+2)^2, x^2, (x-10)^2, (x-2)^2 with
// x <= 1, x <= 2, x <= 4 and the last agent unconstrained.
inline std::vector<AgentSpec> path4_agents() {
  return {
      {C2Function::quadratic(1, 4, 4), C2Function::affine(1, -1), 0.0},
      {C2Function::quadratic(1, 0, 0), C2Function::affine(1, -2), 1.0},
      {C2Function::quadratic(1, -20, 100), C2Function::affine(1, -4), 3.0},
      {C2Function::quadratic(1, -4, 4), std::nullopt, 0.0},
  };
}

/// Spanning tree on shuffled nodes plus random chords.
inline Graph random_connected_graph(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<int, int>> edges;
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    edges.emplace_back(order[pick(rng)], order[k]);
  }
  std::bernoulli_distribution chord(0.25);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool present = false;
      for (auto [a, b] : edges) present |= (a == i && b == j) || (a == j && b == i);
      if (!present && chord(rng)) edges.emplace_back(i, j);
    }
  }
  return Graph::build(n, edges);
}

/// Random quadratics and affine constraints sharing a strictly feasible
/// point, every agent starting strictly inside its own constraint.
inline std::vector<AgentSpec> random_agents(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> curv(0.5, 3.0), centre(-5.0, 5.0),
      slope(0.5, 2.0), margin(0.2, 2.0), start(-4.0, 4.0);
  std::bernoulli_distribution constrained(0.8), upper(0.5);
  const double common = centre(rng) * 0.5;
  std::vector<AgentSpec> out;
  for (int i = 0; i < n; ++i) {
    const double a = curv(rng);
    const double m = centre(rng);
    AgentSpec s{C2Function::quadratic(a, -2.0 * a * m, a * m * m), std::nullopt,
                start(rng)};
    if (constrained(rng)) {
      const double k = slope(rng);
      if (upper(rng)) {
        const double bound = std::max(common, s.x0) + margin(rng);
        s.g = C2Function::affine(k, -k * bound);  // x <= bound
      } else {
        const double bound = std::min(common, s.x0) - margin(rng);
        s.g = C2Function::affine(-k, k * bound);  // x >= bound
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Central difference of `fn` at x.
template <typename Fn>
double central_diff(Fn&& fn, double x, double h) {
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

}  // namespace dio::test
