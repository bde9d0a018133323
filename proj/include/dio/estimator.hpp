#pragma once

#include <vector>

#include <Eigen/Core>

#include "dio/graph.hpp"
#include "dio/protocols.hpp"

namespace dio {

/**
 * Proximal map of lambda * sum_{(i,j) in E} |v_i - v_j| on a graph:
 *
 *   prox(v) = argmin_w  1/2 |w - v|^2 + lambda * sum_E |w_i - w_j|.
 *
 * This is one backward-Euler step of the sign-based estimator: with
 * v = kappa_k + s_{k+1} and lambda = c h, the minimizer w is the estimate
 * nu_{k+1} and kappa_{k+1} = w - s_{k+1}. Nodes whose values coincide in the
 * minimizer have reached finite-time agreement; the sum of the entries is
 * preserved.
 *
 * Solved by exact coordinate descent on the edge duals z in [-1, 1]^E
 * (w = v - lambda D z), followed by a snap that replaces each fused cluster
 * (edges with |w_i - w_j| <= fuse_tol) by its exact cluster value, so agreeing
 * agents hold bit-identical estimates.
 */
class GraphTvProx {
 public:
  explicit GraphTvProx(const Graph& g, double fuse_tol = 1e-9);

  /// Scalar column. `dual` is a warm start of length |E|, updated in place.
  /// When `increment` is given it receives prox(v) - v, assembled from the
  /// edge fluxes rather than by subtraction, so it stays accurate (and sums
  /// to zero up to rounding of its own size) even when v is huge.
  Eigen::VectorXd solve(const Eigen::VectorXd& v, double lambda,
                        Eigen::VectorXd& dual,
                        Eigen::VectorXd* increment = nullptr) const;

  /// Column-wise over a signal matrix. `duals` is |E| x 3.
  SignalMatrix solve(const SignalMatrix& v, double lambda,
                     Eigen::MatrixXd& duals,
                     SignalMatrix* increment = nullptr) const;

  /// Convenience overload without warm start.
  SignalMatrix solve(const SignalMatrix& v, double lambda) const;

  int max_sweeps() const { return max_sweeps_; }

 private:
  Eigen::VectorXd snap(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                       const Eigen::VectorXd& flux, double lambda,
                       Eigen::VectorXd* increment) const;

  int n_;
  std::vector<Edge> edges_;
  double fuse_tol_;
  int max_sweeps_ = 20000;
};

}  // namespace dio
