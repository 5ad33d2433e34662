#include <gtest/gtest.h>

#include <cmath>

#include "drcc/formulations.hpp"
#include "drcc/verify.hpp"
#include "test_support.hpp"

using namespace drcc;
using drcc::testing_support::random_instance;
using drcc::testing_support::RandomSpec;
using drcc::testing_support::toy_instance;

namespace {

PeriodInstance default_fleet_instance(std::size_t n_scen, double alpha) {
  FleetModel fleet = identical_fleet(100);
  std::vector<double> totals;
  for (std::size_t n = 0; n < n_scen; ++n) totals.push_back(50.0 + static_cast<double>(n));
  AmbiguitySpec amb;
  amb.alpha = alpha;
  return make_instance(fleet, initial_temperatures(100, 1), scenario_set_from_totals(totals), amb);
}

SolverParams exact() {
  SolverParams p;
  p.rel_gap = 1e-9;
  p.time_limit = 60;
  return p;
}

}  // namespace

TEST(Omega, HandValues) {
  EXPECT_NEAR(omega_coefficient(0, 1, 0.2), 2.0, 1e-15);
  EXPECT_NEAR(omega_coefficient(0, 1, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(omega_coefficient(0.5, 1, 0.2), std::sqrt(5.0), 1e-14);
}

TEST(Omega, ContinuousAtBranchPointAndNonIncreasing) {
  const double g1 = 0.3, g2 = 1.2, a0 = g1 / g2;
  EXPECT_NEAR(omega_coefficient(g1, g2, a0), omega_coefficient(g1, g2, a0 - 1e-12), 1e-6);
  double prev = kInf;
  for (double a = 0.01; a < 0.99; a += 0.01) {
    const double w = omega_coefficient(g1, g2, a);
    EXPECT_LE(w, prev + 1e-12);
    prev = w;
  }
}

TEST(DualPi, GreedyWeights) {
  auto pi = dual_pi(10, 0.25);
  EXPECT_NEAR(pi[0], 0.1, 1e-15);
  EXPECT_NEAR(pi[1], 0.1, 1e-15);
  EXPECT_NEAR(pi[2], 0.05, 1e-15);
  for (std::size_t i = 3; i < 10; ++i) EXPECT_EQ(pi[i], 0.0);
  auto pi0 = dual_pi(10, 0.05);
  EXPECT_NEAR(pi0[0], 0.05, 1e-15);
  for (double a : {0.01, 0.13, 0.3, 0.77}) {
    double s = 0;
    for (double v : dual_pi(17, a)) s += v;
    EXPECT_NEAR(s, a, 1e-14);
  }
}

TEST(BigM, Values) {
  ScenarioSet s = scenario_set_from_totals({200.0, 100.0});
  SortedScenarios ss = sort_totals(s, 350.0);
  BigMSet b = big_m_values(ss, 0.2, 0.02);
  EXPECT_DOUBLE_EQ(b.m1[0], 200.0);
  EXPECT_DOUBLE_EQ(b.m1[1], 250.0);
  EXPECT_DOUBLE_EQ(b.lambda_upper, 50.0);
  EXPECT_DOUBLE_EQ(b.m3[0], 50.0 * 200.0);
  EXPECT_DOUBLE_EQ(b.mcc[0], 200.0);
  // k = 0: only M2_1 = P(1) - P(1) = 0
  ASSERT_EQ(b.m2.size(), 1u);
  EXPECT_EQ(b.m2[0], 0.0);
  SortedScenarios bad = sort_totals(scenario_set_from_totals({400.0}), 350.0);
  EXPECT_THROW(big_m_values(bad, 0.2, 0.02), AssumptionError);
}

TEST(Deterministic, Counts) {
  PeriodInstance inst = default_fleet_instance(10, 0.2);
  Formulation f = build_deterministic(inst);
  EXPECT_EQ(f.model.num_binaries(), 100u);
  EXPECT_EQ(f.model.num_continuous(), 201u);
}

TEST(Deterministic, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PeriodInstance inst = random_instance(seed, {});
    BuildOptions opt;
    opt.pv_known = 0.4 * inst.max_load();
    Formulation f = build_deterministic(inst, opt);
    SolveResult r = solve_mip(f.model, exact());
    SolveResult bf = brute_force_optimum(inst, ModelKind::det, opt);
    ASSERT_EQ(r.status, SolveStatus::optimal);
    EXPECT_NEAR(r.objective, bf.objective, 1e-7);
  }
}

TEST(CcSaa, BudgetBelowOneScenarioForcesFullCover) {
  PeriodInstance inst = toy_instance({10, 8, 6, 4}, {3, 3, 3, 3, 3}, 0.2, 0.02);
  Formulation f = build_cc_saa(inst);
  EXPECT_EQ(f.model.count_vars("rho_"), 4u);
  SolveResult r = solve_mip(f.model, exact());
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_NEAR(r.objective, 4.0, 1e-9);  // load 12 >= 10
}

TEST(CcSaa, TightBigMAtZeroLoad) {
  PeriodInstance inst = toy_instance({200}, {3}, 0.2, 0.02);
  Formulation f = build_cc_saa(inst);
  const LinearConstraint& row = f.model.rows()[f.model.rows().size() - 2];
  ASSERT_EQ(row.name.rfind("cc_scen", 0), 0u);
  // u = 0, rho = 1: activity 200 against rhs 200.
  std::vector<double> pt(f.model.num_vars(), 0.0);
  pt[f.model.find_var("rho_0")->id] = 1.0;
  EXPECT_DOUBLE_EQ(row.activity(pt), row.rhs);
}

TEST(CcSaa, StrengtheningKeepsOptimum) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    PeriodInstance inst = random_instance(seed, {5, 10, 0.3, 0.02});
    BuildOptions plain;
    plain.strengthen = false;
    const double a = solve_mip(build_cc_saa(inst, plain).model, exact()).objective;
    const double b = solve_mip(build_cc_saa(inst).model, exact()).objective;
    EXPECT_NEAR(a, b, 1e-7);
    EXPECT_NEAR(a, brute_force_optimum(inst, ModelKind::cc).objective, 1e-7);
  }
}

TEST(Moment, CoverRowRightHandSide) {
  PeriodInstance inst = default_fleet_instance(10, 0.2);
  inst.ambiguity.kind = AmbiguityKind::moment;
  inst.moments.theta = 300;
  inst.moments.sigma = 20;
  Formulation f = build_drcc_moment(inst);
  const LinearConstraint& row = f.model.rows().back();
  EXPECT_EQ(row.name, "moment_cover");
  EXPECT_NEAR(row.rhs, 340.0, 1e-12);
  inst.moments.sigma = 0;
  EXPECT_NEAR(build_drcc_moment(inst).model.rows().back().rhs, 300.0, 1e-12);
}

TEST(Milp1, CountsRowsAndBinaries) {
  PeriodInstance inst = default_fleet_instance(100, 0.2);
  Formulation f = build_drcc_w_milp1(inst);
  EXPECT_EQ(f.model.count_rows("w1lin_"), 300u);
  EXPECT_EQ(f.model.num_binaries() - 100u, 100u);
  EXPECT_EQ(f.model.count_rows("w1_radius"), 1u);
}

TEST(Milp2, CountsBeforeAndAfterStrengthening) {
  PeriodInstance inst = default_fleet_instance(100, 0.2);
  BuildOptions plain;
  plain.strengthen = false;
  Formulation f = build_drcc_w_milp2(inst, plain);
  EXPECT_EQ(f.model.num_binaries() - 100u, 21u);
  EXPECT_EQ(f.model.count_rows("w2lin_"), 42u);
  EXPECT_EQ(f.model.count_vars("a_"), 21u);
  Formulation s = build_drcc_w_milp2(inst);
  EXPECT_EQ(s.model.num_binaries() - 100u, 20u);
  EXPECT_EQ(s.model.count_rows("w2_order"), 19u);
}

TEST(Milp2, ZeroRiskIndexEdgeCase) {
  PeriodInstance inst = default_fleet_instance(10, 0.05);
  Formulation s = build_drcc_w_milp2(inst);
  EXPECT_EQ(s.model.num_binaries(), 100u);
  EXPECT_EQ(s.model.count_rows("w2lin_"), 1u);
  EXPECT_EQ(s.model.count_rows("w2_radius"), 1u);
}

TEST(Milp2, HighRiskKeepsOneContinuousTail) {
  PeriodInstance inst = default_fleet_instance(3, 0.99);
  Formulation s = build_drcc_w_milp2(inst);
  EXPECT_EQ(s.model.count_vars("a_"), 3u);
  EXPECT_EQ(s.model.num_binaries() - 100u, 2u);
}

// Totals (10,8,6,4), alpha 0.3, delta 0.04, two 5 kW units: load 10 passes,
// load 5 does not, so both units switch on.
TEST(Milp2, WorkedExample) {
  PeriodInstance inst = toy_instance({10, 8, 6, 4}, {5, 5}, 0.3, 0.04);
  EXPECT_NEAR(wasserstein_lhs(9.0, inst.sorted, 0.3), 0.05, 1e-15);
  EXPECT_NEAR(wasserstein_lhs(10.0, inst.sorted, 0.3), 0.1, 1e-15);
  for (bool strengthen : {false, true}) {
    BuildOptions opt;
    opt.strengthen = strengthen;
    SolveResult r = solve_mip(build_drcc_w_milp2(inst, opt).model, exact());
    ASSERT_EQ(r.status, SolveStatus::optimal);
    EXPECT_NEAR(r.objective, 2.0, 1e-9);
  }
}

TEST(Milp2, AssumptionViolationIsReportedInfeasible) {
  PeriodInstance inst = toy_instance({20, 18}, {5, 5}, 0.3, 0.04);
  Formulation f = build_drcc_w_milp2(inst);
  ASSERT_TRUE(f.infeasible_reason.has_value());
  EXPECT_EQ(solve_mip(f.model, exact()).status, SolveStatus::infeasible);
}

TEST(Milp1, RadiusZeroLimitMatchesEmpiricalChanceConstraint) {
  // A vanishing radius recovers the sample chance constraint (the model
  // needs a positive radius, so a tiny one stands in for zero).
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RandomSpec spec{5, 10, 0.25, 1e-7};
    PeriodInstance inst = random_instance(seed, spec);
    const SolveResult w = solve_mip(build_drcc_w_milp1(inst).model, exact());
    const SolveResult cc = solve_mip(build_cc_saa(inst).model, exact());
    ASSERT_EQ(w.status, cc.status) << seed;
    if (cc.status == SolveStatus::optimal) {
      EXPECT_NEAR(w.objective, cc.objective, 1e-6) << seed;
    }
  }
}

TEST(Milp1Milp2, AgreeOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    PeriodInstance inst = random_instance(seed, {5, 10, 0.3, 0.05});
    const double a = solve_mip(build_drcc_w_milp1(inst).model, exact()).objective;
    BuildOptions plain;
    plain.strengthen = false;
    const double b = solve_mip(build_drcc_w_milp2(inst, plain).model, exact()).objective;
    const double c = solve_mip(build_drcc_w_milp2(inst).model, exact()).objective;
    const double bf = brute_force_optimum(inst, ModelKind::drcc_w2).objective;
    EXPECT_NEAR(a, bf, 1e-6);
    EXPECT_NEAR(b, bf, 1e-6);
    EXPECT_NEAR(c, bf, 1e-6);
  }
}

TEST(Socp2, EmptyWhenGammaOneIsZero) {
  PeriodInstance inst = random_instance(1, {4, 10, 0.2, 0.02, AmbiguityKind::moment, true});
  Formulation f = build_adj_socp2(inst);
  EXPECT_TRUE(f.empty_branch);
}

TEST(Socp2, ConesAdmitTheClosedFormPoint) {
  PeriodInstance inst = random_instance(1, {4, 10, 0.2, 0.02, AmbiguityKind::moment, true});
  inst.ambiguity.gamma1 = 0.5;
  inst.ambiguity.gamma2 = 1.0;
  Formulation f = build_adj_socp2(inst);
  ASSERT_FALSE(f.empty_branch);
  std::vector<double> pt(f.model.num_vars(), 0.0);
  pt[f.alpha->id] = 0.25;
  pt[f.model.find_var("phi")->id] = 2.0;
  pt[f.model.find_var("w")->id] = std::sqrt(2.0);
  pt[f.model.find_var("q")->id] = 1.0 / std::sqrt(2.0);
  for (const SocConstraint& c : f.model.cones()) EXPECT_LE(c.violation(pt), 1e-12) << c.name;
  // Pulling phi below 1/sqrt(alpha) must break some cone for every (q, w).
  pt[f.model.find_var("phi")->id] = 1.9;
  bool broken = false;
  for (const SocConstraint& c : f.model.cones()) broken |= c.violation(pt) > 1e-9;
  EXPECT_TRUE(broken);
}

TEST(Socp3, TangentCutAtOneHalf) {
  TangentCut t = risk_tangent(0.5);
  EXPECT_NEAR(t.slope, -2.0, 1e-12);
  EXPECT_NEAR(t.intercept, 2.0, 1e-12);
}

TEST(Socp3, TangentUnderestimatesOnTheConvexRange) {
  for (double ah : {0.05, 0.2, 0.5, 0.75}) {
    TangentCut t = risk_tangent(ah);
    EXPECT_NEAR(t.at(ah), risk_ratio_root(ah), 1e-12);
    for (double a = 0.001; a <= 0.75; a += 0.001) EXPECT_LE(t.at(a), risk_ratio_root(a) + 1e-12);
  }
}

TEST(Socp1, CountsAndConeMeaning) {
  PeriodInstance inst = random_instance(2, {5, 10, 0.2, 0.02, AmbiguityKind::moment, true});
  Formulation f = build_adj_socp1(inst);
  EXPECT_EQ(f.model.count_vars("g_"), 25u);
  ASSERT_EQ(f.model.cones().size(), 1u);
  // (g2 - g1) sigma^2 <= alpha d exactly when the cone holds.
  const double s = inst.moments.sigma;
  std::vector<double> pt(f.model.num_vars(), 0.0);
  const std::size_t d = f.model.find_var("d")->id;
  pt[f.alpha->id] = 0.3;
  pt[d] = s * s / 0.3 * (1 + 1e-9);
  EXPECT_LE(f.model.cones()[0].violation(pt), 1e-9);
  pt[d] = s * s / 0.3 * (1 - 1e-6);
  EXPECT_GT(f.model.cones()[0].violation(pt), 0.0);
}

TEST(Socp1Socp3, AgreeWithBruteForce) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    PeriodInstance inst = random_instance(seed, {4, 10, 0.2, 0.02, AmbiguityKind::moment, true, 10.0});
    BuildOptions ex;
    ex.moment_branch = BuildOptions::MomentBranch::exact_high;
    Formulation f1 = build_adj_socp1(inst, ex);
    SolveResult r1 = solve_mip(f1.model, exact(), f1.lazy);
    SolveResult bf = brute_force_optimum(inst, ModelKind::adj_m, ex);
    ASSERT_EQ(r1.status, SolveStatus::optimal);
    EXPECT_NEAR(r1.objective, bf.objective, 1e-5) << seed;
    Formulation f3 = build_adj_socp3(inst);
    SolveResult r3 = solve_mip(f3.model, exact(), f3.lazy);
    SolveResult bf3 = brute_force_optimum(inst, ModelKind::adj_m);
    ASSERT_EQ(r3.status, SolveStatus::optimal);
    EXPECT_NEAR(r3.objective, bf3.objective, 1e-5) << seed;
  }
}

TEST(Milp3, CountsAndZeroLambdaForcesFullRisk) {
  PeriodInstance inst = random_instance(3, {4, 10, 0.2, 0.02, AmbiguityKind::wasserstein, true});
  Formulation f = build_adj_w_milp3(inst);
  EXPECT_EQ(f.model.count_rows("w3lin_"), 30u);
  EXPECT_EQ(f.model.num_binaries() - 4u, 10u);
  EXPECT_EQ(f.model.count_rows("mc"), 16u);
  Model fixed = f.model;
  fixed.fix(*fixed.find_var("lambda"), 0.0);
  SolveResult r = solve_mip(fixed, exact());
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_NEAR(r.values[f.alpha->id], 1.0, 1e-9);
  fixed.set_bounds(*f.alpha, 0.0, 0.999);
  EXPECT_EQ(solve_mip(fixed, exact()).status, SolveStatus::infeasible);
}

TEST(Milp4, PairCount) {
  PeriodInstance inst = random_instance(3, {2, 10, 0.2, 0.02, AmbiguityKind::wasserstein, true});
  Formulation f = build_adj_w_milp4(inst);
  EXPECT_EQ(f.model.count_vars("D_"), 55u);
  EXPECT_EQ(f.model.num_binaries(), 57u);
}

TEST(Milp3Milp4, AgreeWithBruteForce) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    PeriodInstance inst = random_instance(seed, {3, 6, 0.2, 0.05, AmbiguityKind::wasserstein, true, 10.0});
    SolveResult r3 = solve_mip(build_adj_w_milp3(inst).model, exact());
    SolveResult r4 = solve_mip(build_adj_w_milp4(inst).model, exact());
    SolveResult bf = brute_force_optimum(inst, ModelKind::adj_w_free);
    ASSERT_EQ(bf.status, SolveStatus::optimal);
    EXPECT_NEAR(r3.objective, bf.objective, 1e-5) << seed;
    EXPECT_NEAR(r4.objective, bf.objective, 1e-5) << seed;
  }
}

TEST(Milp3Milp4, AgreeAtLowRiskCost) {
  // Small risk costs push alpha high and once left node LPs unresolved.
  for (double ct : {0.5, 1.0}) {
    PeriodInstance inst = random_instance(3, {3, 6, 0.2, 0.5, AmbiguityKind::wasserstein, true, ct});
    SolveResult r3 = solve_mip(build_adj_w_milp3(inst).model, exact());
    SolveResult r4 = solve_mip(build_adj_w_milp4(inst).model, exact());
    SolveResult bf = brute_force_optimum(inst, ModelKind::adj_w_free);
    ASSERT_EQ(r4.status, SolveStatus::optimal) << ct;
    EXPECT_NEAR(r3.objective, bf.objective, 1e-5) << ct;
    EXPECT_NEAR(r4.objective, bf.objective, 1e-5) << ct;
  }
}

TEST(AdjWPieces, EveryPieceIsValidAndTheBestIsExact) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    PeriodInstance inst = random_instance(seed, {4, 6, 0.2, 0.05, AmbiguityKind::wasserstein, true, 3.0 * seed});
    const SolveResult bf = brute_force_optimum(inst, ModelKind::adj_w_free);
    ASSERT_EQ(bf.status, SolveStatus::optimal);
    double best = kInf;
    for (std::size_t j = 1; j <= 6; ++j)
      for (std::size_t k = j - 1; k < 6; ++k) {
        Formulation f = build_adj_w_piece(inst, j, k);
        SolveResult r = solve_mip(f.model, exact(), f.lazy);
        if (!r.has_incumbent()) continue;
        // A piece is a sufficient condition: its alpha passes the sorted-gap test.
        double load = 0.0;
        for (std::size_t l = 0; l < f.u.size(); ++l) load += inst.fleet.buildings[l].P * std::round(r.values[f.u[l].id]);
        EXPECT_GE(wasserstein_lhs(load, inst.sorted, r.values[f.alpha->id]), inst.ambiguity.delta - 1e-7);
        EXPECT_GE(r.objective, bf.objective - 1e-6);
        best = std::min(best, r.objective);
      }
    EXPECT_NEAR(best, bf.objective, 1e-6) << seed;
  }
}

TEST(AdjWPieces, RejectsBadIndices) {
  PeriodInstance inst = random_instance(1, {2, 6, 0.2, 0.05, AmbiguityKind::wasserstein, true});
  EXPECT_THROW(build_adj_w_piece(inst, 0, 0), std::invalid_argument);
  EXPECT_THROW(build_adj_w_piece(inst, 3, 1), std::invalid_argument);
  EXPECT_THROW(build_adj_w_piece(inst, 1, 6), std::invalid_argument);
}

TEST(FleetSize, ExcludedUnitsStayAtSetPoint) {
  std::vector<PeriodInstance> periods;
  for (std::uint64_t t = 0; t < 3; ++t) {
    PeriodInstance p = random_instance(41 + t, {4, 10, 0.2, 0.02});
    if (t > 0) {
      p.fleet = periods.front().fleet;
      p.x_prev = periods.front().x_prev;
      p.sorted = sort_totals(p.scenarios, p.fleet);
    }
    periods.push_back(p);
  }
  FleetSizeFormulation f = build_fleet_size(periods, 4, 0.5);
  Model m = f.model;
  m.fix(f.zeta[1], 0.0);
  SolveResult r = solve_mip(m, exact());
  ASSERT_EQ(r.status, SolveStatus::optimal);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(r.values[f.u[t][1].id], 0.0);
    EXPECT_NEAR(r.values[f.x[t][1].id], periods[0].fleet.x_ref, 1e-9);
    EXPECT_NEAR(r.values[f.beta[t][1].id], 0.0, 1e-9);
  }
  EXPECT_LE(r.values[f.fleet_size.id], 4.0 + 1e-9);
}

TEST(FleetSize, RejectsMixedAmbiguity) {
  std::vector<PeriodInstance> periods{random_instance(1, {}), random_instance(1, {})};
  periods[1].ambiguity.kind = AmbiguityKind::moment;
  EXPECT_THROW(build_fleet_size(periods, 4, 1.0), std::invalid_argument);
}

TEST(Kinds, ParseRoundTrip) {
  for (const char* k : {"det", "cc", "drcc-m", "drcc-w1", "drcc-w2", "adj-m", "adj-w-bigm", "adj-w-free", "fleet-size"})
    EXPECT_STREQ(to_string(parse_kind(k)), k);
  EXPECT_THROW(parse_kind("milp9"), std::invalid_argument);
}
