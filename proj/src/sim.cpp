#include "dio/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dio/analysis.hpp"
#include "json.hpp"

namespace dio {

namespace {

bool all_finite(const Eigen::VectorXd& x) { return x.allFinite(); }

}  // namespace

std::string to_string(Mode mode) {
  return mode == Mode::kCentralized ? "centralized" : "distributed";
}

Mode mode_from_string(const std::string& s) {
  if (s == "centralized") return Mode::kCentralized;
  if (s == "distributed") return Mode::kDistributed;
  throw InvalidArgument("unknown mode '" + s + "'");
}

std::string to_string(EstimatorScheme scheme) {
  return scheme == EstimatorScheme::kImplicit ? "implicit" : "explicit";
}

EstimatorScheme estimator_scheme_from_string(const std::string& s) {
  if (s == "implicit") return EstimatorScheme::kImplicit;
  if (s == "explicit") return EstimatorScheme::kExplicit;
  throw InvalidArgument("unknown estimator scheme '" + s + "'");
}

void SimConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidArgument("step must be positive");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("t_end must be non-negative");
  }
  if (!(feasibility_backoff > 0.0 && feasibility_backoff < 1.0)) {
    throw InvalidArgument("feasibility_backoff must lie in (0, 1)");
  }
  if (max_backoffs < 0) throw InvalidArgument("max_backoffs must be >= 0");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (!(sgn_tol >= 0.0)) throw InvalidArgument("sgn_tol must be >= 0");
}

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j = {
      {"mode", to_string(mode)},
      {"estimator", to_string(estimator)},
      {"step", step},
      {"t_end", t_end},
      {"sgn_tol", sgn_tol},
      {"feasibility_backoff", feasibility_backoff},
      {"max_backoffs", max_backoffs},
      {"record_every", record_every},
      {"seed", seed},
  };
  if (kappa0) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < kappa0->rows(); ++i) {
      rows.push_back({(*kappa0)(i, 0), (*kappa0)(i, 1), (*kappa0)(i, 2)});
    }
    j["kappa0"] = rows;
  }
  return j;
}

SimConfig SimConfig::from_json(const nlohmann::json& j, BarrierParams params) {
  if (!j.is_object()) throw ValidationError("sim section must be an object");
  SimConfig c(params);
  try {
    c.mode = mode_from_string(j.value("mode", to_string(c.mode)));
    c.estimator = estimator_scheme_from_string(
        j.value("estimator", to_string(c.estimator)));
    c.step = j.value("step", c.step);
    c.t_end = j.value("t_end", c.t_end);
    c.sgn_tol = j.value("sgn_tol", c.sgn_tol);
    c.feasibility_backoff = j.value("feasibility_backoff", c.feasibility_backoff);
    c.max_backoffs = j.value("max_backoffs", c.max_backoffs);
    c.record_every = j.value("record_every", c.record_every);
    c.seed = j.value("seed", c.seed);
    if (j.contains("kappa0") && !j["kappa0"].is_null()) {
      const auto& rows = j["kappa0"];
      SignalMatrix k(static_cast<Eigen::Index>(rows.size()), 3);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 3) {
          throw ValidationError("kappa0 rows must have three entries");
        }
        for (int col = 0; col < 3; ++col) {
          k(static_cast<Eigen::Index>(i), col) = rows[i][col].get<double>();
        }
      }
      c.kappa0 = k;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad sim section: ") + e.what());
  }
  c.validate();
  return c;
}

Simulator::Simulator(SimConfig config, std::vector<AgentSpec> specs, Graph graph)
    : config_(std::move(config)),
      specs_(std::move(specs)),
      graph_(std::move(graph)),
      prox_(graph_, config_.sgn_tol) {
  config_.validate();
  if (static_cast<int>(specs_.size()) != graph_.size()) {
    throw ValidationError("agent count does not match graph size");
  }
}

NetworkState Simulator::initial_state() const {
  NetworkState s;
  const int n = graph_.size();
  s.t = 0.0;
  s.x.resize(n);
  for (int i = 0; i < n; ++i) s.x(i) = specs_[i].x0;
  s.kappa = config_.kappa0 ? *config_.kappa0 : SignalMatrix::Zero(n, 3);
  return s;
}

SignalMatrix Simulator::estimates(const NetworkState& state,
                                  const SignalMatrix& local) const {
  if (config_.mode == Mode::kCentralized) {
    const Eigen::RowVector3d mean = local.colwise().mean();
    return mean.replicate(local.rows(), 1);
  }
  return estimator_nu(state.kappa, local);
}

Simulator::Derivative Simulator::rhs(const NetworkState& at,
                                     const SignalMatrix& kappa_start,
                                     double theta_h, Eigen::MatrixXd* duals) {
  const int n = graph_.size();
  const auto& p = config_.params;
  Derivative d;
  d.dkappa = SignalMatrix::Zero(n, 3);
  if (config_.mode == Mode::kCentralized) {
    d.dx = centralized_inputs(specs_, p, at.x, at.t, graph_);
    return d;
  }

  const SignalMatrix local = local_signals(specs_, p.alpha(), at.x, at.t);
  SignalMatrix nu;
  if (config_.estimator == EstimatorScheme::kImplicit) {
    const SignalMatrix v = kappa_start + local;
    nu = theta_h > 0.0 ? prox_.solve(v, p.c() * theta_h, *duals) : v;
  } else {
    nu = estimator_nu(at.kappa, local);
    d.dkappa = estimator_rhs(graph_, nu, p.c(), config_.sgn_tol);
  }
  const Eigen::VectorXd r = saturation_terms(graph_, at.x, p.beta1(), p.beta2());
  d.dx.resize(n);
  for (int i = 0; i < n; ++i) {
    d.dx(i) = distributed_input(nu.row(i).transpose(), r(i));
  }
  return d;
}

NetworkState Simulator::try_step(const NetworkState& state, double dt) {
  const bool implicit = config_.mode == Mode::kDistributed &&
                        config_.estimator == EstimatorScheme::kImplicit;
  const auto stage = [&](const Derivative& k, double frac) {
    NetworkState s;
    s.t = state.t + frac * dt;
    s.x = state.x + frac * dt * k.dx;
    s.kappa = implicit ? state.kappa : SignalMatrix(state.kappa + frac * dt * k.dkappa);
    if (!all_finite(s.x)) throw InfeasiblePoint("non-finite stage state");
    return s;
  };

  const Derivative k1 = rhs(state, state.kappa, 0.0, nullptr);
  const Derivative k2 = rhs(stage(k1, 0.5), state.kappa, 0.5 * dt, &duals_half_);
  const Derivative k3 = rhs(stage(k2, 0.5), state.kappa, 0.5 * dt, &duals_half_);
  const Derivative k4 = rhs(stage(k3, 1.0), state.kappa, dt, &duals_full_);

  NetworkState next;
  next.t = state.t + dt;
  next.x = state.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  if (!all_finite(next.x)) throw InfeasiblePoint("non-finite state");
  for (int i = 0; i < graph_.size(); ++i) {
    if (!specs_[i].strictly_feasible(next.x(i))) {
      throw InfeasiblePoint("agent " + std::to_string(i) +
                            " left its feasible set");
    }
  }

  if (config_.mode == Mode::kCentralized) {
    next.kappa = state.kappa;
  } else if (implicit) {
    const SignalMatrix local =
        local_signals(specs_, config_.params.alpha(), next.x, next.t);
    // kappa moves by the prox increment; forming nu - local instead would
    // cancel catastrophically when a barrier signal is huge.
    SignalMatrix increment;
    prox_.solve(SignalMatrix(state.kappa + local), config_.params.c() * dt,
                duals_full_, &increment);
    next.kappa = state.kappa + increment;
  } else {
    next.kappa = state.kappa + dt / 6.0 * (k1.dkappa + 2.0 * k2.dkappa +
                                           2.0 * k3.dkappa + k4.dkappa);
  }
  if (!next.kappa.allFinite()) throw InfeasiblePoint("non-finite estimator state");
  return next;
}

StepResult Simulator::step(const NetworkState& state, std::optional<double> dt) {
  double h = dt.value_or(config_.step);
  if (!(h > 0.0)) throw InvalidArgument("step increment must be positive");
  std::string last_reason;
  for (int attempt = 0; attempt <= config_.max_backoffs; ++attempt) {
    try {
      return StepResult{try_step(state, h), h, attempt};
    } catch (const InfeasiblePoint& e) {
      last_reason = e.what();
    } catch (const SingularHessianEstimate& e) {
      last_reason = e.what();
    } catch (const SingularHessian& e) {
      last_reason = e.what();
    }
    h *= config_.feasibility_backoff;
  }
  throw StepFailed("step at t=" + std::to_string(state.t) + " failed after " +
                       std::to_string(config_.max_backoffs) +
                       " backoffs: " + last_reason,
                   Trajectory{});
}

Sample Simulator::observe(const NetworkState& state, double step_used) const {
  const auto& p = config_.params;
  const int n = graph_.size();
  Sample s;
  s.t = state.t;
  s.x = state.x;
  s.local = local_signals(specs_, p.alpha(), state.x, state.t);
  s.nu = estimates(state, s.local);
  const Eigen::VectorXd r = saturation_terms(graph_, state.x, p.beta1(), p.beta2());
  s.u.resize(n);
  for (int i = 0; i < n; ++i) {
    s.u(i) = distributed_input(s.nu.row(i).transpose(), r(i));
  }
  s.consensus_err = consensus_error(state.x).norm();
  const double sum_l1 = s.local.col(0).sum();
  s.centrality_residual = std::abs(sum_l1);
  s.kappa_drift = state.kappa.colwise().sum().cwiseAbs().maxCoeff();
  s.omega0 = config_.mode == Mode::kCentralized
                 ? omega_diagnostics(specs_, p, state.x, state.t, graph_).omega0
                 : omega_diagnostics_from_estimates(s.nu, p, graph_).omega0;
  s.lyapunov_v = 0.5 * sum_l1 * sum_l1;
  const double target = solve_barrier(specs_, p.alpha(), state.t + 1.0).x_star;
  s.lyapunov_w = 0.5 * (state.x.array() - target).square().sum();
  s.step_used = step_used;
  return s;
}

Trajectory Simulator::run() {
  duals_half_.resize(0, 0);
  duals_full_.resize(0, 0);

  const double h = config_.step;
  const auto grid_steps = static_cast<long>(std::floor(config_.t_end / h + 1e-9));
  Trajectory traj;
  traj.mode = config_.mode;
  traj.agents = graph_.size();
  traj.min_step_used = h;

  NetworkState state = initial_state();
  SignalMatrix prev_local = local_signals(specs_, config_.params.alpha(), state.x, state.t);
  traj.samples.push_back(observe(state, 0.0));

  const auto advance_to = [&](double target) {
    double last_dt = 0.0;
    while (target - state.t > 1e-12 * h) {
      StepResult res = step(state, target - state.t);
      traj.backoffs += res.backoffs;
      traj.min_step_used = std::min(traj.min_step_used, res.dt_used);
      last_dt = res.dt_used;
      state = std::move(res.state);
    }
    state.t = target;
    ++traj.steps;
    const SignalMatrix local =
        local_signals(specs_, config_.params.alpha(), state.x, state.t);
    const double elapsed = h;
    traj.signal_rate_sup = std::max(
        traj.signal_rate_sup, (local - prev_local).cwiseAbs().maxCoeff() / elapsed);
    prev_local = local;
    return last_dt;
  };

  try {
    for (long k = 1; k <= grid_steps; ++k) {
      const double used = advance_to(static_cast<double>(k) * h);
      if (k % config_.record_every == 0) traj.samples.push_back(observe(state, used));
    }
    if (config_.t_end - state.t > 1e-12 * h) advance_to(config_.t_end);
  } catch (const StepFailed& e) {
    traj.final_state = state;
    traj.completed = false;
    traj.gain_warning = config_.mode == Mode::kDistributed &&
                        config_.params.c() <= traj.signal_rate_sup;
    throw StepFailed(e.what(), std::move(traj));
  }

  traj.final_state = state;
  traj.completed = true;
  traj.gain_warning = config_.mode == Mode::kDistributed &&
                      config_.params.c() <= traj.signal_rate_sup;
  return traj;
}

Trajectory run(const SimConfig& config, const std::vector<AgentSpec>& specs,
               const Graph& graph) {
  config.validate();
  const int n = graph.size();
  if (static_cast<int>(specs.size()) != n) {
    throw ValidationError("agent count " + std::to_string(specs.size()) +
                          " does not match graph size " + std::to_string(n));
  }
  if (n >= 2 && !graph.is_connected()) {
    throw DisconnectedGraph("communication graph is not connected");
  }
  for (const auto& a : specs) a.validate();
  if (config.kappa0) {
    const auto& k = *config.kappa0;
    if (k.rows() != n) throw ValidationError("kappa0 must have one row per agent");
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if (k.colwise().sum().cwiseAbs().maxCoeff() > 1e-9 * scale * n) {
      throw ValidationError("kappa0 columns must sum to zero");
    }
  }
  return Simulator(config, specs, graph).run();
}

StepResult step(const NetworkState& state, const SimConfig& config,
                const std::vector<AgentSpec>& specs, const Graph& graph) {
  return Simulator(config, specs, graph).step(state);
}

}  // namespace dio
