#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dio/graph.hpp"
#include "dio/objective.hpp"
#include "dio/sim.hpp"

namespace dio {

/// Solution of a scalar reference problem.
struct OracleResult {
  double x_star = 0.0;
  /// Objective at x_star (F for the constrained problem, the barrier
  /// objective for solve_barrier).
  double value = 0.0;
  /// A constraint boundary is binding at x_star.
  bool active = false;
  int iterations = 0;
};

/// Closed interval {x : g_i(x) <= 0 for all i}; ends may be infinite.
struct FeasibleInterval {
  double lo;
  double hi;
};

/// Intersection of the sublevel sets of all constraints, found by bracketing
/// and bisection on each g_i. Throws EmptyFeasibleSet.
FeasibleInterval feasible_interval(const std::vector<AgentSpec>& specs);

/// F(x) = sum_i f_i(x).
double total_objective(const std::vector<AgentSpec>& specs, double x);

/**
 * Minimizes F(x) = sum f_i(x) subject to g_i(x) <= 0 for all i.
 *
 * Brackets the feasible interval, returns a boundary when F slopes out of
 * the interval there, and otherwise runs golden-section search followed by a
 * safeguarded Newton polish on F'. Shares no code with the protocols.
 */
OracleResult solve_constrained(const std::vector<AgentSpec>& specs);

/**
 * Minimizes sum_i f_i(x) - (alpha / tau) ln(-g_i(x)) over the strictly
 * feasible interval with a bracketed Newton iteration started from the
 * interval midpoint.
 *
 * Stops when |gradient| <= 1e-10 or when the bracket has collapsed to
 * adjacent doubles; close to a boundary with a tiny barrier weight the
 * gradient cannot be resolved below 1e-10 in double precision.
 */
OracleResult solve_barrier(const std::vector<AgentSpec>& specs, double alpha,
                           double tau);

/// |sum_i f_i'(x_i) - alpha/(t+1) g_i'(x_i)/g_i(x_i)|. Throws InfeasiblePoint.
double centrality_residual(const std::vector<AgentSpec>& specs, double alpha,
                           const Eigen::VectorXd& x, double t);

/**
 * Ultimate bound on the consensus error |Pi x|:
 *
 *   (0.2785 beta1 N / beta2) / (beta1 sqrt(lambda2) - omega0).
 *
 * Throws GainConditionViolated when beta1 sqrt(lambda2) <= omega0.
 */
double practical_consensus_radius(const Graph& g, double beta1, double beta2,
                                  double omega0, int n);

/// Largest pairwise sup-norm distance between the rows of `nu`.
double estimate_spread(const SignalMatrix& nu);

/// First sample time from which every later sample has estimate spread
/// <= tol; nullopt when the last sample still disagrees.
std::optional<double> detect_consensus_time(const Trajectory& trajectory,
                                            double tol);

/// F(mean x(t)) - F(x*) per sample, with x* from solve_constrained.
std::vector<double> suboptimality_series(const Trajectory& trajectory,
                                         const std::vector<AgentSpec>& specs);

/// Smallest C with gap(t) <= C / (t + 1) over samples with t >= t_from.
double inverse_time_decay_constant(const Trajectory& trajectory,
                                   const std::vector<double>& gaps,
                                   double t_from);

}  // namespace dio
