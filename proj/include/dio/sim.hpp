#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dio/error.hpp"
#include "dio/estimator.hpp"
#include "dio/graph.hpp"
#include "dio/objective.hpp"
#include "dio/protocols.hpp"

namespace dio {

enum class Mode { kCentralized, kDistributed };

/**
 * How the sign-based estimator is discretized in distributed mode.
 *
 * kImplicit (default): backward-Euler step of the set-valued sign coupling,
 * solved as a graph total-variation proximal map (see GraphTvProx). Agreement
 * is reached exactly in finite time and kept without chattering.
 *
 * kExplicit: the estimator state is advanced by the same RK4 step as the
 * positions using the dead-banded sign. Chatters with amplitude of order
 * c * h * max_degree around agreement.
 */
enum class EstimatorScheme { kImplicit, kExplicit };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);
std::string to_string(EstimatorScheme scheme);
EstimatorScheme estimator_scheme_from_string(const std::string& s);

struct SimConfig {
  explicit SimConfig(BarrierParams p) : params(p) {}

  Mode mode = Mode::kDistributed;
  EstimatorScheme estimator = EstimatorScheme::kImplicit;
  double step = 1e-3;
  double t_end = 30.0;
  BarrierParams params;
  /// Dead-band of the explicit sign and fusion tolerance of the implicit
  /// update: estimates closer than this are treated as agreeing.
  double sgn_tol = 1e-9;
  double feasibility_backoff = 0.5;
  int max_backoffs = 30;
  int record_every = 1;
  std::uint64_t seed = 0;
  /// Optional per-agent initial estimator state; must sum to zero per column.
  std::optional<SignalMatrix> kappa0;

  /// Throws InvalidArgument on h <= 0, t_end < 0, backoff outside (0, 1),
  /// max_backoffs < 0, record_every < 1.
  void validate() const;

  nlohmann::json to_json() const;
  /// Reads the simulation fields; gains come from `params`.
  static SimConfig from_json(const nlohmann::json& j, BarrierParams params);
};

/// Stacked agent positions and estimator states at time t.
struct NetworkState {
  double t = 0.0;
  Eigen::VectorXd x;
  SignalMatrix kappa;
};

struct Sample {
  double t;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  /// Estimates nu_i (distributed) or the exact averages (centralized).
  SignalMatrix nu;
  /// Local signals (l1, l2, l3) of every agent.
  SignalMatrix local;
  double consensus_err;        // |Pi x|_2
  double centrality_residual;  // |sum l1|
  double kappa_drift;          // max_k |sum_i kappa_ik|
  double omega0;
  double lyapunov_v;  // 1/2 (sum l1)^2
  double lyapunov_w;  // 1/2 |x - x_barrier(t) 1|^2
  double step_used;   // last committed increment
};

/**
 * Time-indexed record of one run. Samples are taken on the nominal grid
 * k * step * record_every, so their count is floor(t_end / (step *
 * record_every)) + 1 for a completed run.
 */
struct Trajectory {
  Mode mode = Mode::kDistributed;
  int agents = 0;
  std::vector<Sample> samples;
  NetworkState final_state;
  bool completed = false;

  long steps = 0;
  long backoffs = 0;
  double min_step_used = 0.0;
  /// sup over committed steps of |d/dt (l1, l2, l3)_i|_inf (finite
  /// differences between steps). The estimator gain c is flagged when it does
  /// not exceed this.
  double signal_rate_sup = 0.0;
  bool gain_warning = false;
};

/// Raised when a step cannot be committed after max_backoffs retries. Carries
/// the trajectory recorded up to the failure.
class StepFailed : public Error {
 public:
  StepFailed(const std::string& what, Trajectory partial)
      : Error(ErrorKind::kStepFailed, what), partial_(std::move(partial)) {}

  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

struct StepResult {
  NetworkState state;
  double dt_used;
  int backoffs;
};

/**
 * Integrates the coupled position/estimator dynamics of one network.
 *
 * Holds warm-start data for the implicit estimator between steps, so one
 * instance must not be shared across threads; independent instances are
 * safe to run concurrently.
 */
class Simulator {
 public:
  Simulator(SimConfig config, std::vector<AgentSpec> specs, Graph graph);

  const SimConfig& config() const { return config_; }
  const std::vector<AgentSpec>& specs() const { return specs_; }
  const Graph& graph() const { return graph_; }

  NetworkState initial_state() const;

  /**
   * Classical RK4 advance by `dt` (defaults to config.step). Any stage that
   * leaves the strictly feasible set or meets a singular Hessian estimate,
   * and any infeasible result, triggers a retry with dt scaled by
   * feasibility_backoff, up to max_backoffs times. The result reports the
   * increment actually used. Throws StepFailed (with an empty partial
   * trajectory) when every retry fails.
   */
  StepResult step(const NetworkState& state, std::optional<double> dt = {});

  /// Integrates from the initial state to t_end. Throws StepFailed with the
  /// partial trajectory on failure.
  Trajectory run();

  /// Inputs, estimates and local signals at a committed state.
  Sample observe(const NetworkState& state, double step_used) const;

 private:
  struct Derivative {
    Eigen::VectorXd dx;
    SignalMatrix dkappa;
  };

  Derivative rhs(const NetworkState& at, const SignalMatrix& kappa_start,
                 double theta_h, Eigen::MatrixXd* duals);
  NetworkState try_step(const NetworkState& state, double dt);
  SignalMatrix estimates(const NetworkState& state,
                         const SignalMatrix& local) const;

  SimConfig config_;
  std::vector<AgentSpec> specs_;
  Graph graph_;
  GraphTvProx prox_;
  // Warm starts for the proximal solves at half and full step weights.
  Eigen::MatrixXd duals_half_;
  Eigen::MatrixXd duals_full_;
};

/// Validates inputs (connectivity, strict feasibility of x0, zero-sum
/// kappa0) and integrates. Throws DisconnectedGraph, InfeasibleStart,
/// ValidationError, StepFailed.
Trajectory run(const SimConfig& config, const std::vector<AgentSpec>& specs,
               const Graph& graph);

/// Single step with the same validation-free semantics as Simulator::step.
StepResult step(const NetworkState& state, const SimConfig& config,
                const std::vector<AgentSpec>& specs, const Graph& graph);

}  // namespace dio
