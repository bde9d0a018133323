#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dio/analysis.hpp"
#include "support.hpp"

using dio::AgentSpec;
using dio::C2Function;

namespace {

// Sum of a_i and b_i for quadratics a x^2 + b x + c: the unconstrained
// minimizer is -sum b / (2 sum a).
double quadratic_stationary_point(double sum_a, double sum_b) { return -sum_b / (2 * sum_a); }

// Derivative of sum f_i - w sum ln(b_i - x) for the four path agents, written out
// by hand: 8x - 20 + w sum 1/(b_i - x).
double path4_barrier_slope(double x, double w) {
  return 8 * x - 20 + w * (1 / (1 - x) + 1 / (2 - x) + 1 / (4 - x));
}

double bisect(double lo, double hi, double w) {
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (path4_barrier_slope(mid, w) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Oracle, Path4ConstrainedOptimum) {
  const auto specs = dio::test::path4_agents();
  const auto r = dio::solve_constrained(specs);
  EXPECT_NEAR(r.x_star, 1.0, 1e-8);
  EXPECT_TRUE(r.active);
  EXPECT_NEAR(r.value, 9 + 1 + 81 + 1, 1e-9);
  for (const auto& s : specs) {
    if (s.g) EXPECT_LE(s.g->value(r.x_star), 1e-12);
  }
}

TEST(Oracle, Path4UnconstrainedStationaryPoint) {
  auto specs = dio::test::path4_agents();
  for (auto& s : specs) s.g.reset();
  const auto r = dio::solve_constrained(specs);
  EXPECT_NEAR(r.x_star, quadratic_stationary_point(4, 4 + 0 - 20 - 4), 1e-10);
  EXPECT_NEAR(r.x_star, 2.5, 1e-10);
  EXPECT_FALSE(r.active);
}

TEST(Oracle, FeasibleIntervals) {
  auto specs = dio::test::path4_agents();
  auto box = dio::feasible_interval(specs);
  EXPECT_TRUE(std::isinf(box.lo) && box.lo < 0);
  EXPECT_EQ(box.hi, 1.0);

  std::vector<AgentSpec> disk{{C2Function::quadratic(1, 0, 0), C2Function::quadratic(1, 0, -4), 0.0}};
  box = dio::feasible_interval(disk);
  EXPECT_NEAR(box.lo, -2.0, 1e-12);
  EXPECT_NEAR(box.hi, 2.0, 1e-12);

  // Start outside the sublevel set: the search still finds it.
  disk[0].x0 = 7.0;
  box = dio::feasible_interval(disk);
  EXPECT_NEAR(box.hi, 2.0, 1e-12);

  std::vector<AgentSpec> never{{C2Function::quadratic(1, 0, 0), C2Function::quadratic(1, 0, 1), 0.0}};
  EXPECT_THROW(dio::feasible_interval(never), dio::EmptyFeasibleSet);

  std::vector<AgentSpec> apart{
      {C2Function::quadratic(1, 0, 0), C2Function::affine(1, 0), -1.0},   // x <= 0
      {C2Function::quadratic(1, 0, 0), C2Function::affine(-1, 1), 2.0}};  // x >= 1
  EXPECT_THROW(dio::feasible_interval(apart), dio::EmptyFeasibleSet);
  EXPECT_THROW(dio::solve_constrained(apart), dio::EmptyFeasibleSet);

  std::vector<AgentSpec> point{
      {C2Function::quadratic(1, 0, 0), C2Function::affine(1, -1), 0.0},   // x <= 1
      {C2Function::quadratic(1, 0, 0), C2Function::affine(-1, 1), 2.0}};  // x >= 1
  EXPECT_DOUBLE_EQ(dio::solve_constrained(point).x_star, 1.0);
  EXPECT_THROW(dio::solve_barrier(point, 2.0, 10.0), dio::EmptyFeasibleSet);
}

TEST(Oracle, ConstrainedAgainstGridSearch) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto specs = dio::test::random_agents(1 + trial % 6, rng);
    const auto r = dio::solve_constrained(specs);
    const auto box = dio::feasible_interval(specs);
    const double lo = std::isfinite(box.lo) ? box.lo : -50.0;
    const double hi = std::isfinite(box.hi) ? box.hi : 50.0;
    double best = std::numeric_limits<double>::infinity();
    const int cells = 200000;
    for (int k = 0; k <= cells; ++k) {
      best = std::min(best, dio::total_objective(specs, lo + (hi - lo) * k / cells));
    }
    EXPECT_LE(r.value, best + 1e-12);
    EXPECT_GE(r.x_star, box.lo);
    EXPECT_LE(r.x_star, box.hi);
    for (const auto& s : specs) {
      if (s.g) EXPECT_LE(s.g->value(r.x_star), 1e-12);
    }
  }
}

TEST(Oracle, BarrierAgainstHandBisection) {
  const auto specs = dio::test::path4_agents();
  for (double tau : {1.0, 10.0, 100.0, 1e3, 1e4}) {
    const double alpha = 2.0;
    const auto r = dio::solve_barrier(specs, alpha, tau);
    EXPECT_NEAR(r.x_star, bisect(-10.0, 1.0, alpha / tau), 1e-12);
    EXPECT_LT(r.x_star, 1.0);
  }
}

TEST(Oracle, BarrierAtLargeTau) {
  const auto r = dio::solve_barrier(dio::test::path4_agents(), 2.0, 1e6);
  EXPECT_NEAR(r.x_star, 1.0, 1e-3);
  EXPECT_LT(r.x_star, 1.0);
}

TEST(Oracle, BarrierGapDecays) {
  const auto specs = dio::test::path4_agents();
  const double best = dio::solve_constrained(specs).value;
  const int m = 3;
  for (double alpha : {2.0, 15.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double tau : {10.0, 100.0, 1000.0}) {
      const double x = dio::solve_barrier(specs, alpha, tau).x_star;
      const double gap = dio::total_objective(specs, x) - best;
      EXPECT_LT(gap, prev);
      EXPECT_LE(gap, m * alpha / tau);
      EXPECT_LE(std::abs(x - 1.0), 10 * alpha * m / tau);
      prev = gap;
    }
  }
}

TEST(Oracle, CentralityResidualVanishesOnBarrierPath) {
  const auto specs = dio::test::path4_agents();
  for (double t : {0.0, 1.0, 10.0, 30.0}) {
    const double x = dio::solve_barrier(specs, 2.0, t + 1.0).x_star;
    const Eigen::VectorXd xs = Eigen::VectorXd::Constant(4, x);
    EXPECT_LE(dio::centrality_residual(specs, 2.0, xs, t), 1e-8);
  }
  EXPECT_THROW(dio::centrality_residual(specs, 2.0, Eigen::VectorXd::Ones(4), 0.0),
               dio::InfeasiblePoint);
}

// The minimizer of f - alpha t/(t+1)^2 ln(-g) equals the barrier minimizer
// with tau = (t+1)^2 / t, and that of f - alpha/(t+1) ln(-g) uses tau = t+1.
// For a constrained agent the two differ at finite t and approach each other
// as t grows.
TEST(Oracle, ModifiedAndBarrierLagrangianMinimizersConverge) {
  const auto specs = dio::test::path4_agents();
  const std::vector<AgentSpec> one{specs[2]};
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const double xl = dio::solve_barrier(one, 2.0, t + 1.0).x_star;
    const double xh = dio::solve_barrier(one, 2.0, (t + 1) * (t + 1) / t).x_star;
    const double diff = std::abs(xl - xh);
    EXPECT_GT(diff, 0.0);
    EXPECT_LT(diff, prev);
    prev = diff;
  }
  EXPECT_LT(prev, 1e-6);
  const std::vector<AgentSpec> free{specs[3]};
  EXPECT_NEAR(dio::solve_barrier(free, 2.0, 2.0).x_star,
              dio::solve_barrier(free, 2.0, 4.0 / 1.0).x_star, 1e-12);
}

TEST(Radius, Formula) {
  const auto g = dio::Graph::path(4);
  const double l2 = 2 - std::sqrt(2.0);
  const double r = dio::practical_consensus_radius(g, 2.0, 10.0, 0.0, 4);
  EXPECT_NEAR(r, 0.2785 * 2 * 4 / 10 / (2 * std::sqrt(l2)), 1e-12);
  EXPECT_NEAR(r, 0.14555, 1e-5);
  EXPECT_NEAR(dio::practical_consensus_radius(g, 2.0, 20.0, 0.3, 4) /
                  dio::practical_consensus_radius(g, 2.0, 10.0, 0.3, 4),
              0.5, 1e-12);
  EXPECT_THROW(dio::practical_consensus_radius(g, 0.1, 10.0, 1.0, 4), dio::GainConditionViolated);
  EXPECT_THROW(dio::practical_consensus_radius(g, 0.0, 10.0, 0.0, 4), dio::InvalidArgument);
}

namespace {

dio::Trajectory synthetic(const std::vector<double>& spreads) {
  dio::Trajectory tr;
  tr.agents = 2;
  for (std::size_t k = 0; k < spreads.size(); ++k) {
    dio::Sample s{};
    s.t = static_cast<double>(k);
    s.x = Eigen::VectorXd::Zero(2);
    s.nu = dio::SignalMatrix::Zero(2, 3);
    s.nu(1, 2) = spreads[k];
    tr.samples.push_back(s);
  }
  return tr;
}

}  // namespace

TEST(ConsensusTime, FirstSampleOfFinalAgreement) {
  EXPECT_EQ(dio::detect_consensus_time(synthetic({1, 1, 0, 0}), 1e-6), 2.0);
  // A relapse moves the detection past it.
  EXPECT_EQ(dio::detect_consensus_time(synthetic({1, 0, 1, 0, 0}), 1e-6), 3.0);
  EXPECT_FALSE(dio::detect_consensus_time(synthetic({0, 0, 1}), 1e-6).has_value());
  EXPECT_EQ(dio::detect_consensus_time(synthetic({0, 0}), 1e-6), 0.0);
  EXPECT_FALSE(dio::detect_consensus_time(synthetic({}), 1e-6).has_value());
  dio::SignalMatrix nu(3, 3);
  nu << 0, 1, 2,
        0.5, 1, 2,
        0, 1, 2.25;
  EXPECT_DOUBLE_EQ(dio::estimate_spread(nu), 0.5);
}

TEST(Suboptimality, DecayConstant) {
  const auto specs = dio::test::path4_agents();
  dio::Trajectory tr;
  tr.agents = 4;
  for (double t : {0.0, 1.0, 3.0, 9.0}) {
    dio::Sample s{};
    s.t = t;
    s.x = Eigen::VectorXd::Constant(4, 1.0 - 1.0 / (t + 1));
    tr.samples.push_back(s);
  }
  const auto gaps = dio::suboptimality_series(tr, specs);
  ASSERT_EQ(gaps.size(), 4u);
  // F(1 - d) - F(1) = 12 d + 4 d^2 with d = 1/(t+1).
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const double d = 1.0 / (tr.samples[k].t + 1);
    EXPECT_NEAR(gaps[k], 12 * d + 4 * d * d, 1e-12);
  }
  EXPECT_NEAR(dio::inverse_time_decay_constant(tr, gaps, 3.0), 12 + 4.0 / 4, 1e-12);
  EXPECT_THROW(dio::inverse_time_decay_constant(tr, {1.0}, 0.0), dio::InvalidArgument);
}
