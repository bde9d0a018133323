#include "dio/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dio/error.hpp"

namespace dio {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

GraphTvProx::GraphTvProx(const Graph& g, double fuse_tol)
    : n_(g.size()), edges_(g.edges()), fuse_tol_(fuse_tol) {
  if (!(fuse_tol >= 0.0)) {
    throw InvalidArgument("fuse tolerance must be non-negative");
  }
}

Eigen::VectorXd GraphTvProx::solve(const Eigen::VectorXd& v, double lambda,
                                   Eigen::VectorXd& dual,
                                   Eigen::VectorXd* increment) const {
  if (v.size() != n_) throw InvalidArgument("prox input size mismatch");
  if (lambda < 0.0) throw InvalidArgument("prox weight must be non-negative");
  const auto m = static_cast<Eigen::Index>(edges_.size());
  if (dual.size() != m) dual = Eigen::VectorXd::Zero(m);
  if (lambda == 0.0 || m == 0) {
    if (increment) *increment = Eigen::VectorXd::Zero(n_);
    return v;
  }

  dual = dual.cwiseMax(-1.0).cwiseMin(1.0);
  Eigen::VectorXd w = v;
  for (Eigen::Index e = 0; e < m; ++e) {
    w(edges_[e].from) += lambda * dual(e);
    w(edges_[e].to) -= lambda * dual(e);
  }

  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (int sweep = 0; sweep < max_sweeps_; ++sweep) {
    double largest = 0.0;
    for (Eigen::Index e = 0; e < m; ++e) {
      const int i = edges_[e].from;
      const int j = edges_[e].to;
      const double target =
          std::clamp(dual(e) + (w(j) - w(i)) / (2.0 * lambda), -1.0, 1.0);
      const double delta = lambda * (target - dual(e));
      if (delta != 0.0) {
        w(i) += delta;
        w(j) -= delta;
        dual(e) = target;
        largest = std::max(largest, std::abs(delta));
      }
    }
    if (largest <= tol) break;
  }

  // Rebuild from the duals to drop the drift of the incremental updates.
  Eigen::VectorXd flux = Eigen::VectorXd::Zero(n_);
  for (Eigen::Index e = 0; e < m; ++e) {
    flux(edges_[e].from) += lambda * dual(e);
    flux(edges_[e].to) -= lambda * dual(e);
  }
  w = v + flux;
  return snap(v, w, flux, lambda, increment);
}

SignalMatrix GraphTvProx::solve(const SignalMatrix& v, double lambda,
                                Eigen::MatrixXd& duals,
                                SignalMatrix* increment) const {
  const auto m = static_cast<Eigen::Index>(edges_.size());
  if (duals.rows() != m || duals.cols() != 3) duals = Eigen::MatrixXd::Zero(m, 3);
  SignalMatrix out(v.rows(), 3);
  if (increment) increment->resize(v.rows(), 3);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd dual = duals.col(k);
    Eigen::VectorXd inc;
    out.col(k) = solve(Eigen::VectorXd(v.col(k)), lambda, dual,
                       increment ? &inc : nullptr);
    if (increment) increment->col(k) = inc;
    duals.col(k) = dual;
  }
  return out;
}

SignalMatrix GraphTvProx::solve(const SignalMatrix& v, double lambda) const {
  Eigen::MatrixXd duals;
  return solve(v, lambda, duals);
}

Eigen::VectorXd GraphTvProx::snap(const Eigen::VectorXd& v,
                                  const Eigen::VectorXd& w,
                                  const Eigen::VectorXd& flux, double lambda,
                                  Eigen::VectorXd* increment) const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  bool any_fused = false;
  for (const auto& e : edges_) {
    if (std::abs(w(e.from) - w(e.to)) <= fuse_tol_) {
      parent[find_root(parent, e.from)] = find_root(parent, e.to);
      any_fused = true;
    }
  }
  if (!any_fused) {
    if (increment) *increment = flux;
    return w;
  }

  std::vector<int> cluster(n_);
  for (int i = 0; i < n_; ++i) cluster[i] = find_root(parent, i);

  // Each fused cluster takes the mean of its inputs corrected by the flux of
  // the saturated edges leaving it; internal fluxes cancel in the sum.
  std::vector<double> total(n_, 0.0);
  std::vector<double> outflow(n_, 0.0);
  std::vector<int> count(n_, 0);
  for (int i = 0; i < n_; ++i) {
    total[cluster[i]] += v(i);
    ++count[cluster[i]];
  }
  std::vector<double> dual_sign(edges_.size(), 0.0);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const int a = cluster[edges_[k].from];
    const int b = cluster[edges_[k].to];
    if (a == b) continue;
    const double gap = w(edges_[k].to) - w(edges_[k].from);
    dual_sign[k] = gap > 0.0 ? 1.0 : -1.0;
    outflow[a] += lambda * dual_sign[k];
    outflow[b] -= lambda * dual_sign[k];
  }

  Eigen::VectorXd snapped(n_);
  for (int i = 0; i < n_; ++i) {
    const int c = cluster[i];
    snapped(i) = (total[c] + outflow[c]) / count[c];
  }
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (dual_sign[k] == 0.0) continue;
    const double gap = snapped(edges_[k].to) - snapped(edges_[k].from);
    if (gap * dual_sign[k] <= 0.0) {
      if (increment) *increment = flux;
      return w;
    }
  }
  if (increment) {
    // Singletons move by their edge fluxes alone; fused members move to the
    // cluster value.
    increment->resize(n_);
    for (int i = 0; i < n_; ++i) {
      const int c = cluster[i];
      (*increment)(i) = count[c] == 1 ? outflow[c] : snapped(i) - v(i);
    }
  }
  return snapped;
}

}  // namespace dio
