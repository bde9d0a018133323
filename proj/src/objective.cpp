#include "dio/objective.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "dio/error.hpp"

namespace dio {

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InvalidArgument(std::string("missing numeric field \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

std::string describe_point(double x, double gx) {
  std::ostringstream os;
  os.precision(17);
  os << "g(" << x << ") = " << gx << " is not strictly negative";
  return os.str();
}

}  // namespace

C2Function::C2Function(std::string kind, nlohmann::json params, Evaluator eval,
                       bool convex)
    : kind_(std::move(kind)),
      params_(std::move(params)),
      eval_(std::move(eval)),
      convex_(convex) {}

C2Function C2Function::quadratic(double a, double b, double c) {
  if (!(a > 0.0)) {
    throw InvalidArgument("quadratic needs a > 0 for strict convexity");
  }
  return C2Function(
      "quadratic", {{"type", "quadratic"}, {"a", a}, {"b", b}, {"c", c}},
      [a, b, c](double x) {
        return Derivatives{(a * x + b) * x + c, 2.0 * a * x + b, 2.0 * a};
      },
      true);
}

C2Function C2Function::affine(double m, double k) {
  return C2Function(
      "affine", {{"type", "affine"}, {"m", m}, {"k", k}},
      [m, k](double x) { return Derivatives{m * x + k, m, 0.0}; }, true);
}

C2Function C2Function::custom(std::string name, Evaluator eval, bool convex) {
  if (!eval) throw InvalidArgument("custom function needs an evaluator");
  nlohmann::json params = {{"type", "custom"}, {"name", name}};
  return C2Function(std::move(name), std::move(params), std::move(eval),
                    convex);
}

nlohmann::json C2Function::to_json() const { return params_; }

C2Function C2Function::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw InvalidArgument("function JSON needs a \"type\"");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "quadratic") {
    return quadratic(require_number(j, "a"), require_number(j, "b"),
                     require_number(j, "c"));
  }
  if (type == "affine") {
    return affine(require_number(j, "m"), require_number(j, "k"));
  }
  throw InvalidArgument("unknown function type \"" + type + "\"");
}

bool AgentSpec::strictly_feasible(double x) const {
  return !g || g->value(x) < 0.0;
}

void AgentSpec::validate() const {
  if (!f.convex()) {
    throw InvalidArgument("local objective must be declared convex");
  }
  if (g && !g->convex()) {
    throw InvalidArgument("local constraint must be declared convex");
  }
  if (!strictly_feasible(x0)) {
    throw InfeasibleStart("initial position: " + describe_point(x0, g->value(x0)));
  }
}

nlohmann::json AgentSpec::to_json() const {
  return {{"f", f.to_json()},
          {"g", g ? g->to_json() : nlohmann::json(nullptr)},
          {"x0", x0}};
}

AgentSpec AgentSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("f")) {
    throw InvalidArgument("agent JSON needs an \"f\"");
  }
  std::optional<C2Function> g;
  if (j.contains("g") && !j.at("g").is_null()) {
    g = C2Function::from_json(j.at("g"));
  }
  return AgentSpec{C2Function::from_json(j.at("f")), std::move(g),
                   require_number(j, "x0")};
}

BarrierParams::BarrierParams(double alpha, double beta1, double beta2,
                             double c)
    : alpha_(alpha), beta1_(beta1), beta2_(beta2), c_(c) {
  if (!(alpha > 1.0)) throw InvalidArgument("alpha must exceed 1");
  if (!(beta1 > 0.0)) throw InvalidArgument("beta1 must be positive");
  if (!(beta2 > 0.0)) throw InvalidArgument("beta2 must be positive");
  if (!(c > 0.0)) throw InvalidArgument("estimator gain c must be positive");
}

BarrierParams BarrierParams::with(const std::string& name, double value) const {
  if (name == "alpha") return {value, beta1_, beta2_, c_};
  if (name == "beta1") return {alpha_, value, beta2_, c_};
  if (name == "beta2") return {alpha_, beta1_, value, c_};
  if (name == "c") return {alpha_, beta1_, beta2_, value};
  throw InvalidArgument("unknown gain \"" + name + "\"");
}

nlohmann::json BarrierParams::to_json() const {
  return {{"alpha", alpha_}, {"beta1", beta1_}, {"beta2", beta2_}, {"c", c_}};
}

BarrierParams BarrierParams::from_json(const nlohmann::json& j) {
  return {require_number(j, "alpha"), require_number(j, "beta1"),
          require_number(j, "beta2"), require_number(j, "c")};
}

BarrierEval barrier_eval(const AgentSpec& spec, double alpha, double x,
                         double t) {
  const Derivatives f = spec.f(x);
  if (!spec.g) return {f.value, f.d1, 0.0, f.d2};

  const Derivatives g = (*spec.g)(x);
  if (!(g.value < 0.0)) throw InfeasiblePoint(describe_point(x, g.value));

  const double w = alpha / (t + 1.0);
  const double ratio = g.d1 / g.value;
  return {
      f.value - w * std::log(-g.value),
      f.d1 - w * ratio,
      w / (t + 1.0) * ratio,
      f.d2 - w * (g.d2 * g.value - g.d1 * g.d1) / (g.value * g.value),
  };
}

double lhat_eval(const AgentSpec& spec, double alpha, double x, double t) {
  const double fx = spec.f.value(x);
  if (!spec.g) return fx;
  const double gx = spec.g->value(x);
  if (!(gx < 0.0)) throw InfeasiblePoint(describe_point(x, gx));
  return fx - alpha * t / ((t + 1.0) * (t + 1.0)) * std::log(-gx);
}

std::vector<AgentSpec> agents_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw InvalidArgument("\"agents\" must be a non-empty array");
  }
  std::vector<AgentSpec> specs;
  specs.reserve(j.size());
  for (const auto& a : j) specs.push_back(AgentSpec::from_json(a));
  return specs;
}

}  // namespace dio
