#include "dio/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "dio/error.hpp"

namespace dio {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInfeasiblePoint: return "InfeasiblePoint";
    case ErrorKind::kSingularHessian: return "SingularHessian";
    case ErrorKind::kSingularHessianEstimate: return "SingularHessianEstimate";
    case ErrorKind::kStepFailed: return "StepFailed";
    case ErrorKind::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::kInfeasibleStart: return "InfeasibleStart";
    case ErrorKind::kEmptyFeasibleSet: return "EmptyFeasibleSet";
    case ErrorKind::kGainConditionViolated: return "GainConditionViolated";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

Graph::Graph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), neighbors_(n) {
  for (const auto& e : edges_) {
    neighbors_[e.from].push_back(e.to);
    neighbors_[e.to].push_back(e.from);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

Graph Graph::build(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw InvalidArgument("graph needs at least one node");
  std::set<Edge> seen;
  std::vector<Edge> canonical;
  canonical.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw InvalidArgument("edge (" + std::to_string(i) + "," +
                            std::to_string(j) + ") out of range for n=" +
                            std::to_string(n));
    }
    if (i == j) {
      throw InvalidArgument("self-loop at node " + std::to_string(i));
    }
    Edge e{std::min(i, j), std::max(i, j)};
    if (!seen.insert(e).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(e.from) + "," +
                            std::to_string(e.to) + ")");
    }
    canonical.push_back(e);
  }
  std::sort(canonical.begin(), canonical.end());
  return Graph(n, std::move(canonical));
}

Graph Graph::complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return build(n, edges);
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return build(n, edges);
}

int Graph::max_degree() const {
  int d = 0;
  for (int i = 0; i < n_; ++i) d = std::max(d, degree(i));
  return d;
}

bool Graph::adjacent(int i, int j) const {
  const auto& list = neighbors_.at(i);
  return std::binary_search(list.begin(), list.end(), j);
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& e : edges_) {
    a(e.from, e.to) = 1.0;
    a(e.to, e.from) = 1.0;
  }
  return a;
}

Eigen::MatrixXd Graph::incidence() const {
  Eigen::MatrixXd d =
      Eigen::MatrixXd::Zero(n_, static_cast<Eigen::Index>(edges_.size()));
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    d(edges_[k].from, static_cast<Eigen::Index>(k)) = -1.0;
    d(edges_[k].to, static_cast<Eigen::Index>(k)) = 1.0;
  }
  return d;
}

Eigen::MatrixXd Graph::laplacian() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& e : edges_) {
    l(e.from, e.to) -= 1.0;
    l(e.to, e.from) -= 1.0;
    l(e.from, e.from) += 1.0;
    l(e.to, e.to) += 1.0;
  }
  return l;
}

Eigen::VectorXd Graph::laplacian_spectrum() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      laplacian(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double Graph::algebraic_connectivity() const {
  if (n_ < 2) {
    throw InvalidArgument("algebraic connectivity needs at least two nodes");
  }
  // The eigensolver can return tiny negative values for the zero eigenvalue.
  return std::max(0.0, laplacian_spectrum()(1));
}

int Graph::component_count() const {
  std::vector<bool> visited(n_, false);
  int components = 0;
  for (int start = 0; start < n_; ++start) {
    if (visited[start]) continue;
    ++components;
    std::queue<int> frontier;
    frontier.push(start);
    visited[start] = true;
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      for (int w : neighbors_[v]) {
        if (!visited[w]) {
          visited[w] = true;
          frontier.push(w);
        }
      }
    }
  }
  return components;
}

bool Graph::is_connected() const { return component_count() == 1; }

Projector::Projector(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("projector dimension must be positive");
}

Eigen::VectorXd Projector::apply(const Eigen::VectorXd& x) const {
  if (x.size() != n_) {
    throw InvalidArgument("projector dimension mismatch");
  }
  return x.array() - x.mean();
}

Eigen::MatrixXd Projector::dense() const {
  return Eigen::MatrixXd::Identity(n_, n_) -
         Eigen::MatrixXd::Constant(n_, n_, 1.0 / n_);
}

Eigen::VectorXd consensus_error(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw InvalidArgument("empty state vector");
  return Projector(static_cast<int>(x.size())).apply(x);
}

Eigen::VectorXd consensus_error(const Graph& g, const Eigen::VectorXd& x) {
  if (x.size() != g.size()) {
    throw InvalidArgument("state length " + std::to_string(x.size()) +
                          " does not match graph size " +
                          std::to_string(g.size()));
  }
  return consensus_error(x);
}

void to_json(nlohmann::json& j, const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.from, e.to});
  j = nlohmann::json{{"n", g.size()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw InvalidArgument("graph JSON needs \"n\" and \"edges\"");
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw InvalidArgument("graph edge must be a pair [i, j]");
    }
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return Graph::build(j.at("n").get<int>(), edges);
}

}  // namespace dio
