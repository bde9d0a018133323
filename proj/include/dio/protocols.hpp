#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "dio/graph.hpp"
#include "dio/objective.hpp"

namespace dio {

/// Per-agent triple aligned with (l1, l2, l3).
using Triple = Eigen::Vector3d;

/// One row per agent, columns aligned with (l1, l2, l3).
using SignalMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Partial derivatives of a time-varying objective Q(x, t) at one point.
struct NewtonTerms {
  double grad;     // dQ/dx
  double cross;    // d2Q/dxdt
  double hessian;  // d2Q/dx2
};

using TimeVaryingObjective = std::function<NewtonTerms(double x, double t)>;

/**
 * Newton flow tracking the minimizer of a time-varying strictly convex Q:
 *
 *   u = -(d2Q/dx2)^-1 (dQ/dx + d2Q/dxdt).
 *
 * Throws SingularHessian when |d2Q/dx2| < 1e-12.
 */
double centralized_single_input(const NewtonTerms& terms);
double centralized_single_input(const TimeVaryingObjective& q, double x,
                                double t);

/// r_i = -beta1 * sum_{j in N_i} tanh(beta2 (x_i - x_j)).
double saturation_term(const Graph& g, const Eigen::VectorXd& x, double beta1,
                       double beta2, int i);
Eigen::VectorXd saturation_terms(const Graph& g, const Eigen::VectorXd& x,
                                 double beta1, double beta2);

/// Rows (l1, l2, l3) of barrier_eval for every agent at its own position.
/// Propagates InfeasiblePoint.
SignalMatrix local_signals(const std::vector<AgentSpec>& specs, double alpha,
                           const Eigen::VectorXd& x, double t);

/**
 * Collective law built from the network-wide sums of the local signals plus
 * the agent's saturation term:
 *
 *   u_i = -(sum l3)^-1 (sum l1 + sum l2) + r_i.
 *
 * Throws SingularHessian when |sum l3| < 1e-12; propagates InfeasiblePoint.
 */
double centralized_collective_input(const std::vector<AgentSpec>& specs,
                                    const BarrierParams& params,
                                    const Eigen::VectorXd& x, double t,
                                    const Graph& g, int i);
Eigen::VectorXd centralized_inputs(const std::vector<AgentSpec>& specs,
                                   const BarrierParams& params,
                                   const Eigen::VectorXd& x, double t,
                                   const Graph& g);

/// Sign with a dead-band: 0 when |z| <= tol.
double dead_band_sign(double z, double tol);

/**
 * Right-hand side of the sign-based estimator for agent i:
 *
 *   dkappa_i/dt = -c * sum_{j in N_i} sgn(nu_i - nu_j)   (componentwise)
 *
 * The sum over all agents is exactly zero because sgn is odd and every edge
 * appears twice with opposite arguments.
 */
Triple estimator_rhs(const Graph& g, const SignalMatrix& nu, double c, int i,
                     double sgn_tol);
SignalMatrix estimator_rhs(const Graph& g, const SignalMatrix& nu, double c,
                           double sgn_tol);

/// nu = kappa + local signals.
SignalMatrix estimator_nu(const SignalMatrix& kappa, const SignalMatrix& local);

/**
 * Distributed law u_i = -nu_i3^-1 (nu_i1 + nu_i2) + r_i.
 *
 * Throws SingularHessianEstimate when |nu_i3| <= 1e-10, i.e. the estimator
 * has not yet produced a usable Hessian average.
 */
double distributed_input(const Triple& nu_i, double r_i);

/**
 * Spread of the optimization part of the input across agents.
 *
 * omega_i = nu_i3^-1 (nu_i1 + nu_i2); omega0 = max |omega_i - omega_j|;
 * gain_margin = beta1 sqrt(lambda2) - omega0.
 */
struct OmegaDiagnostics {
  Eigen::VectorXd omega;
  double omega0 = 0.0;
  double gain_margin = 0.0;

  bool gain_condition() const { return gain_margin > 0.0; }
};

/// Centralized reading: every omega_i comes from the true global sums, so
/// omega0 is zero.
OmegaDiagnostics omega_diagnostics(const std::vector<AgentSpec>& specs,
                                   const BarrierParams& params,
                                   const Eigen::VectorXd& x, double t,
                                   const Graph& g);

/// Distributed reading: omega_i comes from agent i's own estimate nu_i.
OmegaDiagnostics omega_diagnostics_from_estimates(const SignalMatrix& nu,
                                                  const BarrierParams& params,
                                                  const Graph& g);

}  // namespace dio
