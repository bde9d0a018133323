#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dio {

/// Value and first two derivatives of a scalar function at one point.
struct Derivatives {
  double value;
  double d1;
  double d2;
};

/**
 * A twice continuously differentiable scalar function.
 *
 * Convexity is declared by the constructor, not proven; tests spot-check it.
 * Instances are immutable and cheap to copy (the evaluator is shared).
 */
class C2Function {
 public:
  using Evaluator = std::function<Derivatives(double)>;

  /// a x^2 + b x + c with a > 0. Throws InvalidArgument otherwise.
  static C2Function quadratic(double a, double b, double c);

  /// m x + k.
  static C2Function affine(double m, double k);

  /// User-supplied evaluator. Not JSON-serializable.
  static C2Function custom(std::string name, Evaluator eval, bool convex);

  Derivatives operator()(double x) const { return eval_(x); }
  double value(double x) const { return eval_(x).value; }

  bool convex() const { return convex_; }
  const std::string& kind() const { return kind_; }

  /// Serialized form, e.g. {"type":"quadratic","a":1,"b":4,"c":4}.
  nlohmann::json to_json() const;
  static C2Function from_json(const nlohmann::json& j);

 private:
  C2Function(std::string kind, nlohmann::json params, Evaluator eval,
             bool convex);

  std::string kind_;
  nlohmann::json params_;
  Evaluator eval_;
  bool convex_;
};

/// One agent: local objective f, optional local constraint g(x) <= 0, and the
/// initial position. A missing g contributes no barrier term.
struct AgentSpec {
  C2Function f;
  std::optional<C2Function> g;
  double x0 = 0.0;

  /// True when g is absent or g(x) < 0.
  bool strictly_feasible(double x) const;

  /// Throws InfeasibleStart when g(x0) >= 0, InvalidArgument when f is not
  /// declared convex.
  void validate() const;

  nlohmann::json to_json() const;
  static AgentSpec from_json(const nlohmann::json& j);
};

/**
 * Gains of the protocol: barrier weight alpha (> 1), consensus gains beta1
 * and beta2 (> 0) and estimator gain c (> 0). Validated on construction.
 */
class BarrierParams {
 public:
  BarrierParams(double alpha, double beta1, double beta2, double c);

  double alpha() const { return alpha_; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double c() const { return c_; }

  /// Copy with one gain replaced; `name` is one of alpha, beta1, beta2, c.
  BarrierParams with(const std::string& name, double value) const;

  nlohmann::json to_json() const;
  static BarrierParams from_json(const nlohmann::json& j);

 private:
  double alpha_;
  double beta1_;
  double beta2_;
  double c_;
};

/**
 * Local time-varying barrier Lagrangian
 *
 *   L(x, t) = f(x) - alpha / (t + 1) * ln(-g(x))
 *
 * and the three partial derivatives the protocols consume:
 * l1 = dL/dx, l2 = d2L/dxdt, l3 = d2L/dx2.
 */
struct BarrierEval {
  double value;
  double l1;
  double l2;
  double l3;
};

/// Throws InfeasiblePoint when g(x) >= 0.
BarrierEval barrier_eval(const AgentSpec& spec, double alpha, double x,
                         double t);

/// f(x) - alpha t / (t + 1)^2 * ln(-g(x)). Its x-derivative equals l1 + l2.
/// Throws InfeasiblePoint when g(x) >= 0.
double lhat_eval(const AgentSpec& spec, double alpha, double x, double t);

std::vector<AgentSpec> agents_from_json(const nlohmann::json& j);

}  // namespace dio
