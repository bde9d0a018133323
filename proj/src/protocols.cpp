#include "dio/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dio/error.hpp"

namespace dio {

namespace {

constexpr double kMinHessian = 1e-12;
constexpr double kMinHessianEstimate = 1e-10;

void check_sizes(const std::vector<AgentSpec>& specs, const Eigen::VectorXd& x,
                 const Graph& g) {
  if (static_cast<int>(specs.size()) != g.size() || x.size() != g.size()) {
    throw InvalidArgument("agent count, state length and graph size differ");
  }
}

}  // namespace

double centralized_single_input(const NewtonTerms& terms) {
  if (std::abs(terms.hessian) < kMinHessian) {
    throw SingularHessian("Hessian magnitude below 1e-12");
  }
  return -(terms.grad + terms.cross) / terms.hessian;
}

double centralized_single_input(const TimeVaryingObjective& q, double x,
                                double t) {
  return centralized_single_input(q(x, t));
}

double saturation_term(const Graph& g, const Eigen::VectorXd& x, double beta1,
                       double beta2, int i) {
  double sum = 0.0;
  for (int j : g.neighbors(i)) sum += std::tanh(beta2 * (x(i) - x(j)));
  return -beta1 * sum;
}

Eigen::VectorXd saturation_terms(const Graph& g, const Eigen::VectorXd& x,
                                 double beta1, double beta2) {
  if (x.size() != g.size()) {
    throw InvalidArgument("state length does not match graph size");
  }
  // Accumulate per edge so that the two endpoint contributions cancel
  // exactly in the network-wide sum.
  Eigen::VectorXd r = Eigen::VectorXd::Zero(g.size());
  for (const auto& e : g.edges()) {
    const double flow = beta1 * std::tanh(beta2 * (x(e.from) - x(e.to)));
    r(e.from) -= flow;
    r(e.to) += flow;
  }
  return r;
}

SignalMatrix local_signals(const std::vector<AgentSpec>& specs, double alpha,
                           const Eigen::VectorXd& x, double t) {
  if (x.size() != static_cast<Eigen::Index>(specs.size())) {
    throw InvalidArgument("state length does not match agent count");
  }
  SignalMatrix s(specs.size(), 3);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto ev = barrier_eval(specs[i], alpha, x(i), t);
    s.row(i) << ev.l1, ev.l2, ev.l3;
  }
  return s;
}

double centralized_collective_input(const std::vector<AgentSpec>& specs,
                                    const BarrierParams& params,
                                    const Eigen::VectorXd& x, double t,
                                    const Graph& g, int i) {
  check_sizes(specs, x, g);
  const SignalMatrix s = local_signals(specs, params.alpha(), x, t);
  const Eigen::RowVector3d sum = s.colwise().sum();
  return centralized_single_input(NewtonTerms{sum(0), sum(1), sum(2)}) +
         saturation_term(g, x, params.beta1(), params.beta2(), i);
}

Eigen::VectorXd centralized_inputs(const std::vector<AgentSpec>& specs,
                                   const BarrierParams& params,
                                   const Eigen::VectorXd& x, double t,
                                   const Graph& g) {
  check_sizes(specs, x, g);
  const SignalMatrix s = local_signals(specs, params.alpha(), x, t);
  const Eigen::RowVector3d sum = s.colwise().sum();
  const double shared =
      centralized_single_input(NewtonTerms{sum(0), sum(1), sum(2)});
  return saturation_terms(g, x, params.beta1(), params.beta2()).array() +
         shared;
}

double dead_band_sign(double z, double tol) {
  if (std::abs(z) <= tol) return 0.0;
  return z > 0.0 ? 1.0 : -1.0;
}

Triple estimator_rhs(const Graph& g, const SignalMatrix& nu, double c, int i,
                     double sgn_tol) {
  Triple rate = Triple::Zero();
  for (int j : g.neighbors(i)) {
    for (int k = 0; k < 3; ++k) {
      rate(k) -= c * dead_band_sign(nu(i, k) - nu(j, k), sgn_tol);
    }
  }
  return rate;
}

SignalMatrix estimator_rhs(const Graph& g, const SignalMatrix& nu, double c,
                           double sgn_tol) {
  if (nu.rows() != g.size()) {
    throw InvalidArgument("estimate rows do not match graph size");
  }
  SignalMatrix rate = SignalMatrix::Zero(g.size(), 3);
  for (const auto& e : g.edges()) {
    for (int k = 0; k < 3; ++k) {
      const double s = c * dead_band_sign(nu(e.from, k) - nu(e.to, k), sgn_tol);
      rate(e.from, k) -= s;
      rate(e.to, k) += s;
    }
  }
  return rate;
}

SignalMatrix estimator_nu(const SignalMatrix& kappa,
                          const SignalMatrix& local) {
  if (kappa.rows() != local.rows()) {
    throw InvalidArgument("estimator state and local signals differ in size");
  }
  return kappa + local;
}

double distributed_input(const Triple& nu_i, double r_i) {
  if (!(std::abs(nu_i(2)) > kMinHessianEstimate)) {
    throw SingularHessianEstimate("Hessian estimate magnitude below 1e-10");
  }
  return -(nu_i(0) + nu_i(1)) / nu_i(2) + r_i;
}

namespace {

OmegaDiagnostics finish_omega(Eigen::VectorXd omega,
                              const BarrierParams& params, const Graph& g) {
  OmegaDiagnostics d;
  d.omega0 = omega.size() > 0 ? omega.maxCoeff() - omega.minCoeff() : 0.0;
  d.omega = std::move(omega);
  const double lambda2 = g.size() >= 2 ? g.algebraic_connectivity() : 0.0;
  d.gain_margin = params.beta1() * std::sqrt(lambda2) - d.omega0;
  return d;
}

}  // namespace

OmegaDiagnostics omega_diagnostics(const std::vector<AgentSpec>& specs,
                                   const BarrierParams& params,
                                   const Eigen::VectorXd& x, double t,
                                   const Graph& g) {
  check_sizes(specs, x, g);
  const SignalMatrix s = local_signals(specs, params.alpha(), x, t);
  const Eigen::RowVector3d sum = s.colwise().sum();
  const double w = -centralized_single_input(NewtonTerms{sum(0), sum(1), sum(2)});
  return finish_omega(Eigen::VectorXd::Constant(g.size(), w), params, g);
}

OmegaDiagnostics omega_diagnostics_from_estimates(const SignalMatrix& nu,
                                                  const BarrierParams& params,
                                                  const Graph& g) {
  if (nu.rows() != g.size()) {
    throw InvalidArgument("estimate rows do not match graph size");
  }
  Eigen::VectorXd omega(g.size());
  for (int i = 0; i < g.size(); ++i) {
    omega(i) = -distributed_input(nu.row(i).transpose(), 0.0);
  }
  return finish_omega(std::move(omega), params, g);
}

}  // namespace dio
