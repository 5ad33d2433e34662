#include <gtest/gtest.h>

#include "drcc/verify.hpp"
#include "test_support.hpp"

using namespace drcc;
using drcc::testing_support::random_instance;
using drcc::testing_support::toy_instance;

namespace {
SortedScenarios four() { return sort_totals(scenario_set_from_totals({10, 8, 6, 4}), 20.0); }
}  // namespace

TEST(WassersteinOracle, WorkedValue) {
  OracleVerdict v = wasserstein_feasible(9.0, four(), 0.3, 0.05);
  EXPECT_TRUE(v.feasible);
  EXPECT_NEAR(v.slack, 0.0, 1e-15);
  EXPECT_FALSE(wasserstein_feasible(9.0, four(), 0.3, 0.0501).feasible);
  EXPECT_NEAR(wasserstein_lhs(4.0, four(), 0.3), 0.0, 0.0);
  EXPECT_FALSE(wasserstein_feasible(3.0, four(), 0.3, 1e-6).feasible);
}

TEST(WassersteinOracle, AssumptionViolation) {
  SortedScenarios s = sort_totals(scenario_set_from_totals({10, 8}), 7.0);
  OracleVerdict v = wasserstein_feasible(7.0, s, 0.3, 0.01);
  EXPECT_FALSE(v.feasible);
  EXPECT_FALSE(v.detail.empty());
}

TEST(WassersteinOracle, MonotoneInLoadAndRadius) {
  SortedScenarios s = sort_totals(scenario_set_from_totals({9.1, 3.3, 7.7, 5.2, 6.6, 8.0, 4.4}), 20.0);
  for (double alpha : {0.1, 0.3, 0.55, 0.9}) {
    double prev = -1e300;
    for (double load = 0; load <= 20; load += 0.05) {
      const double slack = wasserstein_feasible(load, s, alpha, 0.02).slack;
      EXPECT_GE(slack, prev - 1e-15);
      prev = slack;
      EXPECT_GE(slack, wasserstein_feasible(load, s, alpha, 0.03).slack);
    }
  }
}

TEST(WassersteinOracle, ZeroRadiusMatchesEmpiricalCoverage) {
  // With a zero radius the condition reads "load exceeds the (k+1)-th largest
  // total", the sample chance constraint with a strict inequality at the knot.
  ScenarioSet set = scenario_set_from_totals({9.1, 3.3, 7.7, 5.2, 6.6, 8.0, 4.4, 2.5, 6.1, 7.2});
  SortedScenarios s = sort_totals(set, 20.0);
  for (double alpha : {0.15, 0.25, 0.35}) {
    const std::size_t k = risk_index(alpha, s.size());
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      const double load = 0.5 * (s.sorted[j] + s.sorted[j + 1]);
      const bool oracle = wasserstein_lhs(load, s, alpha) > 0.0;
      const bool empirical = out_of_sample_probability(load, set) >= 1.0 - alpha - 1e-12;
      EXPECT_EQ(oracle, empirical) << alpha << " " << load << " k=" << k;
    }
  }
}

TEST(MomentOracle, Values) {
  OracleVerdict v = moment_feasible(340, 300, 20, 2.0);
  EXPECT_TRUE(v.feasible);
  EXPECT_EQ(v.slack, 0.0);
  EXPECT_FALSE(moment_feasible(339.9, 300, 20, 2.0).feasible);
  EXPECT_TRUE(moment_feasible(300, 300, 0, 7.0).feasible);
  EXPECT_NEAR(moment_feasible(300, 300, 20, omega_coefficient(0, 1, 0.2)).slack, -40.0, 1e-12);
}

TEST(OutOfSample, Counting) {
  ScenarioSet s = scenario_set_from_totals({10, 8, 6, 4});
  EXPECT_EQ(out_of_sample_probability(9.0, s), 0.75);
  EXPECT_EQ(out_of_sample_probability(10.0, s), 1.0);
  EXPECT_EQ(out_of_sample_probability(3.9, s), 0.0);
}

TEST(Cvar, PrimalLpMatchesGreedyDual) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> totals(3 + trial % 9);
    for (double& t : totals) t = U(rng);
    SortedScenarios s = sort_totals(scenario_set_from_totals(totals), 12.0);
    const double alpha = 0.05 + 0.9 * U(rng) / 10.0;
    const double load = U(rng);
    LpSolution lp = solve_lp(cvar_primal_lp(load, s, alpha));
    ASSERT_EQ(lp.status, LpStatus::optimal);
    EXPECT_NEAR(lp.objective, cvar_dual_value(load, s, alpha), 1e-8);
    EXPECT_NEAR(-lp.objective, wasserstein_lhs(load, s, alpha), 1e-8);
  }
}

TEST(BruteForce, TwoUnitMomentExample) {
  PeriodInstance inst = toy_instance({4.0}, {3.5, 3.5}, 0.2, 0.02);
  inst.ambiguity.kind = AmbiguityKind::moment;
  inst.moments.theta = 4.0;
  inst.moments.sigma = 0.0;
  SolveResult r = brute_force_optimum(inst, ModelKind::drcc_m);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
  EXPECT_EQ(r.values, (std::vector<double>{1, 1}));
  inst.moments.theta = 0.0;
  SolveResult z = brute_force_optimum(inst, ModelKind::drcc_m);
  EXPECT_EQ(z.objective, 0.0);
  EXPECT_EQ(z.values, (std::vector<double>{0, 0}));
}

TEST(BruteForce, RejectsLargeFleets) {
  PeriodInstance inst = toy_instance({4.0}, std::vector<double>(21, 1.0), 0.2, 0.02);
  EXPECT_THROW(brute_force_optimum(inst, ModelKind::cc), std::invalid_argument);
}

TEST(BruteForce, AdjustableWassersteinAlphaIsMinimal) {
  PeriodInstance inst = random_instance(5, {4, 8, 0.2, 0.03, AmbiguityKind::wasserstein, true, 10.0});
  SolveResult r = brute_force_optimum(inst, ModelKind::adj_w_free);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  ASSERT_TRUE(r.alpha.has_value());
  double load = 0;
  for (std::size_t l = 0; l < inst.fleet.size(); ++l) load += inst.fleet.buildings[l].P * r.values[l];
  EXPECT_GE(wasserstein_lhs(load, inst.sorted, *r.alpha), inst.ambiguity.delta - 1e-12);
  if (*r.alpha > 1.0 / 8.0 + 1e-9) {
    EXPECT_LT(wasserstein_lhs(load, inst.sorted, *r.alpha - 1e-6), inst.ambiguity.delta);
  }
}

TEST(Recheck, AcceptsSolverOutputAndCatchesTampering) {
  PeriodInstance inst = random_instance(3, {5, 10, 0.3, 0.05});
  Formulation f = build_drcc_w_milp2(inst);
  SolveResult r = solve_mip(f.model);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_TRUE(recheck(inst, ModelKind::drcc_w2, f, r).feasible);
  SolveResult bad = r;
  bad.objective -= 1.0;
  EXPECT_FALSE(recheck(inst, ModelKind::drcc_w2, f, bad).feasible);
  SolveResult off = r;
  for (VarRef u : f.u) off.values[u.id] = 0.0;
  EXPECT_FALSE(recheck(inst, ModelKind::drcc_w2, f, off).feasible);
}
