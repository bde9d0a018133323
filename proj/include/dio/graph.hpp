#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

namespace dio {

/// Unordered edge stored canonically with `from < to`. In the incidence
/// matrix the edge leaves `from` (entry -1) and enters `to` (entry +1).
struct Edge {
  int from;
  int to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Undirected, unweighted communication graph.
 *
 * Immutable after construction. Edges are kept in lexicographic order, which
 * fixes the column order of the incidence matrix D, so that L = D Dᵀ holds
 * entrywise for the stored orientation.
 */
class Graph {
 public:
  /**
   * Builds a graph on `n` nodes.
   *
   * Throws InvalidArgument on n < 1, self-loops, out-of-range indices and
   * duplicate edges (including reversed duplicates).
   */
  static Graph build(int n, const std::vector<std::pair<int, int>>& edges);

  /// Complete graph K_n.
  static Graph complete(int n);

  /// Path 0 - 1 - ... - (n-1).
  static Graph path(int n);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }
  int degree(int i) const { return static_cast<int>(neighbors(i).size()); }
  int max_degree() const;
  bool adjacent(int i, int j) const;

  Eigen::MatrixXd adjacency() const;
  /// Node-by-edge incidence matrix D.
  Eigen::MatrixXd incidence() const;
  Eigen::MatrixXd laplacian() const;

  /// All Laplacian eigenvalues in ascending order (dense symmetric solver).
  Eigen::VectorXd laplacian_spectrum() const;

  /// Second-smallest Laplacian eigenvalue. Throws InvalidArgument for n < 2.
  double algebraic_connectivity() const;

  /// Connectivity by breadth-first traversal, independent of the spectrum.
  bool is_connected() const;
  int component_count() const;

 private:
  Graph(int n, std::vector<Edge> edges);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

/**
 * The consensus projector Π = I - (1/N) 1 1ᵀ, applied without forming the
 * dense matrix.
 */
class Projector {
 public:
  explicit Projector(int n);

  int size() const { return n_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;

 private:
  int n_;
};

/// ē = x - mean(x) 1. Throws InvalidArgument on an empty vector.
Eigen::VectorXd consensus_error(const Eigen::VectorXd& x);

/// Same as consensus_error, but checks the length against the graph.
Eigen::VectorXd consensus_error(const Graph& g, const Eigen::VectorXd& x);

void to_json(nlohmann::json& j, const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace dio
