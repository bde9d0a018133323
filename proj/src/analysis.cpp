#include "dio/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dio/error.hpp"

namespace dio {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenRatio = 0.6180339887498949;
constexpr double kExpansionLimit = 1e15;

/// Minimizes a unimodal function on [a, b] by golden-section search.
template <typename Fn>
double golden_section(Fn&& fn, double a, double b, double rel_tol,
                      int& iterations) {
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  while (std::abs(b - a) > rel_tol * (1.0 + std::abs(a) + std::abs(b)) &&
         iterations < 10000) {
    ++iterations;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

/// A point with g(p) <= 0, searched by descending the convex g from `hint`.
std::optional<double> find_feasible_point(const C2Function& g, double hint) {
  if (g.value(hint) <= 0.0) return hint;
  const double slope = g(hint).d1;
  if (slope == 0.0) return std::nullopt;  // hint minimizes g and g > 0 there
  const double dir = slope > 0.0 ? -1.0 : 1.0;
  double prev = hint;
  for (double step = 1.0; step < kExpansionLimit * (1.0 + std::abs(hint));
       step *= 2.0) {
    const double x = hint + dir * step;
    const auto gx = g(x);
    if (gx.value <= 0.0) return x;
    if (gx.d1 * dir >= 0.0) {
      // Passed the minimizer of g without reaching the sublevel set.
      int iterations = 0;
      const double lo = std::min(prev, x);
      const double hi = std::max(prev, x);
      const double xm = golden_section([&](double z) { return g.value(z); },
                                       lo, hi, 1e-14, iterations);
      if (g.value(xm) <= 0.0) return xm;
      return std::nullopt;
    }
    prev = x;
  }
  return std::nullopt;
}

/// Last point with g <= 0 walking from feasible p in direction dir.
double sublevel_boundary(const C2Function& g, double p, double dir) {
  double feasible = p;
  double infeasible = p;
  bool crossed = false;
  for (double step = 1.0; step < kExpansionLimit * (1.0 + std::abs(p));
       step *= 2.0) {
    const double x = p + dir * step;
    if (g.value(x) > 0.0) {
      infeasible = x;
      crossed = true;
      break;
    }
    feasible = x;
  }
  if (!crossed) return dir * kInf;
  double a = feasible;
  double b = infeasible;
  for (;;) {
    const double mid = a + 0.5 * (b - a);
    if (mid == a || mid == b) break;
    if (g.value(mid) <= 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return a;
}

double objective_slope(const std::vector<AgentSpec>& specs, double x) {
  double s = 0.0;
  for (const auto& a : specs) s += a.f(x).d1;
  return s;
}

double objective_curvature(const std::vector<AgentSpec>& specs, double x) {
  double s = 0.0;
  for (const auto& a : specs) s += a.f(x).d2;
  return s;
}

struct BarrierDerivs {
  double value;
  double slope;
  double curvature;
  bool feasible;
};

BarrierDerivs barrier_objective(const std::vector<AgentSpec>& specs,
                                double weight, double x) {
  BarrierDerivs b{0.0, 0.0, 0.0, true};
  for (const auto& a : specs) {
    const auto f = a.f(x);
    b.value += f.value;
    b.slope += f.d1;
    b.curvature += f.d2;
    if (!a.g) continue;
    const auto g = (*a.g)(x);
    if (!(g.value < 0.0)) {
      b.feasible = false;
      continue;
    }
    b.value -= weight * std::log(-g.value);
    b.slope -= weight * g.d1 / g.value;
    b.curvature -= weight * (g.d2 * g.value - g.d1 * g.d1) / (g.value * g.value);
  }
  return b;
}

/// Walks from x0 in direction dir until `pred` holds.
template <typename Pred>
double expand_until(double x0, double dir, Pred&& pred) {
  for (double step = 1.0; step < kExpansionLimit * (1.0 + std::abs(x0));
       step *= 2.0) {
    const double x = x0 + dir * step;
    if (pred(x)) return x;
  }
  throw EmptyFeasibleSet("objective is not radially unbounded on the feasible set");
}

}  // namespace

FeasibleInterval feasible_interval(const std::vector<AgentSpec>& specs) {
  FeasibleInterval out{-kInf, kInf};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& a = specs[i];
    if (!a.g) continue;
    const auto p = find_feasible_point(*a.g, a.x0);
    if (!p) {
      throw EmptyFeasibleSet("constraint of agent " + std::to_string(i) +
                             " has an empty sublevel set");
    }
    out.lo = std::max(out.lo, sublevel_boundary(*a.g, *p, -1.0));
    out.hi = std::min(out.hi, sublevel_boundary(*a.g, *p, 1.0));
  }
  if (out.lo > out.hi) {
    throw EmptyFeasibleSet("constraints have no common feasible point");
  }
  return out;
}

double total_objective(const std::vector<AgentSpec>& specs, double x) {
  double s = 0.0;
  for (const auto& a : specs) s += a.f.value(x);
  return s;
}

OracleResult solve_constrained(const std::vector<AgentSpec>& specs) {
  if (specs.empty()) throw InvalidArgument("no agents");
  const FeasibleInterval box = feasible_interval(specs);
  OracleResult out;

  const auto boundary = [&](double x) {
    out.x_star = x;
    out.value = total_objective(specs, x);
    out.active = true;
    return out;
  };
  if (box.lo == box.hi) return boundary(box.lo);
  if (std::isfinite(box.hi) && objective_slope(specs, box.hi) <= 0.0) {
    return boundary(box.hi);
  }
  if (std::isfinite(box.lo) && objective_slope(specs, box.lo) >= 0.0) {
    return boundary(box.lo);
  }

  // Interior minimizer: find a finite bracket with F' < 0 < F'.
  const double anchor = std::isfinite(box.lo)   ? box.lo
                        : std::isfinite(box.hi) ? box.hi
                                                : 0.0;
  double a = std::isfinite(box.lo) ? box.lo : anchor;
  double b = std::isfinite(box.hi) ? box.hi : anchor;
  if (!std::isfinite(box.lo) && objective_slope(specs, a) >= 0.0) {
    a = expand_until(anchor, -1.0,
                     [&](double x) { return objective_slope(specs, x) < 0.0; });
  }
  if (!std::isfinite(box.hi) && objective_slope(specs, b) <= 0.0) {
    b = expand_until(anchor, 1.0,
                     [&](double x) { return objective_slope(specs, x) > 0.0; });
  }

  int iterations = 0;
  double x = golden_section([&](double z) { return total_objective(specs, z); },
                            a, b, 1e-9, iterations);

  // Newton polish on F', bracketed by the sign of F'.
  for (int k = 0; k < 100; ++k) {
    ++iterations;
    const double slope = objective_slope(specs, x);
    if (slope == 0.0) break;
    if (slope < 0.0) {
      a = std::max(a, x);
    } else {
      b = std::min(b, x);
    }
    double next = x - slope / objective_curvature(specs, x);
    if (!(next > a && next < b)) next = a + 0.5 * (b - a);
    if (next == x) break;
    x = next;
  }
  out.x_star = x;
  out.value = total_objective(specs, x);
  out.active = false;
  out.iterations = iterations;
  return out;
}

OracleResult solve_barrier(const std::vector<AgentSpec>& specs, double alpha,
                           double tau) {
  if (specs.empty()) throw InvalidArgument("no agents");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  const FeasibleInterval box = feasible_interval(specs);
  if (!(box.lo < box.hi)) {
    throw EmptyFeasibleSet("no strictly feasible point");
  }
  const double weight = alpha / tau;
  const auto eval = [&](double x) { return barrier_objective(specs, weight, x); };

  double x;
  if (std::isfinite(box.lo) && std::isfinite(box.hi)) {
    x = 0.5 * (box.lo + box.hi);
  } else if (std::isfinite(box.lo)) {
    x = box.lo + 1.0;
  } else if (std::isfinite(box.hi)) {
    x = box.hi - 1.0;
  } else {
    x = 0.0;
  }
  if (!eval(x).feasible) throw EmptyFeasibleSet("no strictly feasible point");

  // Open bracket: the barrier sends the slope to -inf at lo and +inf at hi.
  double a = box.lo;
  double b = box.hi;
  if (!std::isfinite(a)) {
    a = eval(x).slope < 0.0
            ? x
            : expand_until(x, -1.0, [&](double z) { return eval(z).slope < 0.0; });
  }
  if (!std::isfinite(b)) {
    b = eval(x).slope > 0.0
            ? x
            : expand_until(x, 1.0, [&](double z) { return eval(z).slope > 0.0; });
  }

  OracleResult out;
  for (int k = 0; k < 2000; ++k) {
    out.iterations = k + 1;
    const auto d = eval(x);
    if (std::abs(d.slope) <= 1e-10) break;
    if (d.slope < 0.0) {
      a = x;
    } else {
      b = x;
    }
    double next = x - d.slope / d.curvature;
    if (!(next > a && next < b) || !eval(next).feasible) {
      next = a + 0.5 * (b - a);
    }
    if (next == x || next == a || next == b) break;
    x = next;
  }
  out.x_star = x;
  out.value = eval(x).value;
  out.active = false;
  return out;
}

double centrality_residual(const std::vector<AgentSpec>& specs, double alpha,
                           const Eigen::VectorXd& x, double t) {
  if (x.size() != static_cast<Eigen::Index>(specs.size())) {
    throw InvalidArgument("state length does not match agent count");
  }
  const double weight = alpha / (t + 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    sum += specs[i].f(x(i)).d1;
    if (!specs[i].g) continue;
    const auto g = (*specs[i].g)(x(i));
    if (!(g.value < 0.0)) {
      throw InfeasiblePoint("agent " + std::to_string(i) +
                            " outside its strictly feasible set");
    }
    sum -= weight * g.d1 / g.value;
  }
  return std::abs(sum);
}

double practical_consensus_radius(const Graph& g, double beta1, double beta2,
                                  double omega0, int n) {
  if (!(beta1 > 0.0) || !(beta2 > 0.0) || n < 1) {
    throw InvalidArgument("radius needs beta1, beta2 > 0 and n >= 1");
  }
  const double margin = beta1 * std::sqrt(g.algebraic_connectivity()) - omega0;
  if (!(margin > 0.0)) {
    throw GainConditionViolated("beta1 sqrt(lambda2) does not exceed omega0");
  }
  return 0.2785 * beta1 * n / beta2 / margin;
}

double estimate_spread(const SignalMatrix& nu) {
  if (nu.rows() == 0) return 0.0;
  return (nu.colwise().maxCoeff() - nu.colwise().minCoeff()).maxCoeff();
}

std::optional<double> detect_consensus_time(const Trajectory& trajectory,
                                            double tol) {
  const auto& samples = trajectory.samples;
  if (samples.empty()) return std::nullopt;
  std::size_t first_agreeing = samples.size();
  for (std::size_t k = samples.size(); k-- > 0;) {
    if (estimate_spread(samples[k].nu) > tol) break;
    first_agreeing = k;
  }
  if (first_agreeing == samples.size()) return std::nullopt;
  return samples[first_agreeing].t;
}

std::vector<double> suboptimality_series(const Trajectory& trajectory,
                                         const std::vector<AgentSpec>& specs) {
  const double best = solve_constrained(specs).value;
  std::vector<double> gaps;
  gaps.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) {
    gaps.push_back(total_objective(specs, s.x.mean()) - best);
  }
  return gaps;
}

double inverse_time_decay_constant(const Trajectory& trajectory,
                                   const std::vector<double>& gaps,
                                   double t_from) {
  if (gaps.size() != trajectory.samples.size()) {
    throw InvalidArgument("gap series does not match trajectory");
  }
  double c = 0.0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const double t = trajectory.samples[k].t;
    if (t >= t_from) c = std::max(c, gaps[k] * (t + 1.0));
  }
  return c;
}

}  // namespace dio
