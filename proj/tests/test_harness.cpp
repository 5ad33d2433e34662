#include <gtest/gtest.h>

#include <sstream>

#include "drcc/harness.hpp"
#include "test_support.hpp"

using namespace drcc;
using drcc::testing_support::random_instance;

namespace {

// Ten-unit fleet with the PV profile scaled to match.
DayConfig small_day() {
  DayConfig c;
  c.fleet = identical_fleet(10);
  c.profile = synthetic_bell_profile(53, 8 * 60 + 20, 10, 5.8, 12 * 60 + 40, 110.0, 1);
  c.periods = {20, 21, 22, 23, 24};
  c.n_scenarios = 30;
  c.n_oos = 200;
  c.solver.time_limit = 30;
  return c;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(NearestRank, TopOfTenIsTheMaximum) {
  std::vector<double> p;
  for (int i = 0; i < 10; ++i) p.push_back(0.80 + 0.02 * i);
  std::reverse(p.begin(), p.end());
  EXPECT_DOUBLE_EQ(nearest_rank(p, 0.95), 0.98);
  EXPECT_DOUBLE_EQ(nearest_rank(p, 0.5), 0.88);
  EXPECT_DOUBLE_EQ(nearest_rank({0.3}, 0.95), 0.3);
  EXPECT_THROW(nearest_rank({}, 0.95), std::invalid_argument);
}

TEST(RunSequential, ChainsTemperaturesAndStaysInBand) {
  const DayConfig cfg = small_day();
  const DayRun run = run_sequential(cfg, ModelKind::drcc_w2);
  ASSERT_EQ(run.periods.size(), 5u);
  EXPECT_EQ(run.solved(), 5u);
  EXPECT_EQ(run.fallbacks(), 0u);
  EXPECT_EQ(run.periods.front().x_prev, cfg.initial_state());
  for (std::size_t i = 0; i < run.periods.size(); ++i) {
    const PeriodRecord& p = run.periods[i];
    if (i > 0) {
      EXPECT_EQ(p.x_prev, run.periods[i - 1].x);
    }
    double load = 0.0;
    for (std::size_t l = 0; l < p.u.size(); ++l) {
      EXPECT_DOUBLE_EQ(p.x[l], step_temperature(cfg.fleet.buildings[l], p.x_prev[l], p.u[l]));
      load += cfg.fleet.buildings[l].P * p.u[l];
    }
    EXPECT_DOUBLE_EQ(p.load, load);
  }
  EXPECT_EQ(comfort_violations(run, cfg.fleet), 0u);
}

TEST(RunSequential, DeterministicForASeed) {
  const DayConfig cfg = small_day();
  const DayRun a = run_sequential(cfg, ModelKind::drcc_m);
  const DayRun b = run_sequential(cfg, ModelKind::drcc_m);
  ASSERT_EQ(a.periods.size(), b.periods.size());
  for (std::size_t i = 0; i < a.periods.size(); ++i) {
    EXPECT_EQ(a.periods[i].u, b.periods[i].u);
    EXPECT_EQ(a.periods[i].objective, b.periods[i].objective);
  }
}

TEST(RunSequential, InfeasiblePeriodHoldsPreviousSchedule) {
  DayConfig cfg = small_day();
  cfg.ambiguity.delta = 1e4;  // no load can cover a ball this large
  std::ostringstream log;
  const DayRun run = run_sequential(cfg, ModelKind::drcc_w2, &log);
  EXPECT_EQ(run.fallbacks(), run.periods.size());
  for (const PeriodRecord& p : run.periods) EXPECT_EQ(p.u, std::vector<int>(10, 0));
  EXPECT_NE(log.str().find("holding previous schedule"), std::string::npos);
  for (const OracleVerdict& v : verify_run(cfg, run)) EXPECT_FALSE(v.feasible);
}

TEST(VerifyRun, AcceptsRunsAndCatchesTampering) {
  const DayConfig cfg = small_day();
  DayRun run = run_sequential(cfg, ModelKind::cc);
  for (const OracleVerdict& v : verify_run(cfg, run)) EXPECT_TRUE(v.feasible) << v.detail;
  run.periods[2].objective -= 0.5;
  const auto verdicts = verify_run(cfg, run);
  EXPECT_FALSE(verdicts[2].feasible);
  EXPECT_NE(verdicts[2].detail.find("recomputed"), std::string::npos);
}

TEST(VerifyRun, AdjustableRunsPass) {
  const DayConfig cfg = small_day();
  for (ModelKind k : {ModelKind::adj_m, ModelKind::adj_w_free}) {
    const DayRun run = run_sequential(cfg, k);
    EXPECT_EQ(run.solved(), run.periods.size()) << to_string(k);
    for (const OracleVerdict& v : verify_run(cfg, run)) EXPECT_TRUE(v.feasible) << to_string(k) << ": " << v.detail;
  }
}

TEST(OutOfSample, FullCoverageAndPercentiles) {
  DayRun run;
  PeriodRecord p;
  p.period = 0;
  p.load = 100.0;
  run.periods.push_back(p);
  p.period = 1;
  p.load = 9.0;
  run.periods.push_back(p);
  std::vector<std::vector<ScenarioSet>> sets;
  for (int s = 0; s < 10; ++s)
    sets.push_back({scenario_set_from_totals({10, 8, 6, 4}), scenario_set_from_totals({10, 8, 6, 4})});
  const EvalReport r = evaluate_out_of_sample(run, sets, identical_fleet(1));
  ASSERT_EQ(r.p95.size(), 2u);
  EXPECT_DOUBLE_EQ(r.p95[0], 1.0);
  EXPECT_DOUBLE_EQ(r.p95[1], 0.75);
  EXPECT_EQ(r.probability[1].size(), 10u);
}

TEST(OutOfSample, SetsAreIndependentOfInSampleData) {
  const DayConfig cfg = small_day();
  const auto oos = out_of_sample_sets(cfg, 0);
  const ScenarioSet in = in_sample_set(cfg, 20, cfg.n_oos);
  EXPECT_NE(oos.at(20).totals, in.totals);
  EXPECT_NE(out_of_sample_sets(cfg, 1).at(20).totals, oos.at(20).totals);
}

TEST(SolvePeriod, PiecesMatchTheSingleModels) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const PeriodInstance inst = random_instance(seed, {5, 8, 0.2, 0.05, AmbiguityKind::wasserstein, true, 4.0});
    SolverParams p;
    p.rel_gap = 1e-9;
    const PeriodSolve pieces = solve_period(inst, ModelKind::adj_w_free, {}, p, {AdjustableMode::bnc, WassersteinMode::pieces});
    const PeriodSolve milp4 = solve_period(inst, ModelKind::adj_w_free, {}, p);
    const PeriodSolve milp3 = solve_period(inst, ModelKind::adj_w_bigm, {}, p);
    const SolveResult bf = brute_force_optimum(inst, ModelKind::adj_w_free);
    ASSERT_EQ(pieces.result.status, SolveStatus::optimal);
    EXPECT_NEAR(pieces.result.objective, bf.objective, 1e-6) << seed;
    EXPECT_NEAR(milp4.result.objective, bf.objective, 1e-6) << seed;
    EXPECT_NEAR(milp3.result.objective, bf.objective, 1e-6) << seed;
    EXPECT_TRUE(recheck(inst, ModelKind::adj_w_free, pieces.formulation, pieces.result).feasible);
  }
}

TEST(SolvePeriod, MomentModesAgreeBelowTheOuterCap) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const PeriodInstance inst = random_instance(seed, {4, 8, 0.2, 0.05, AmbiguityKind::moment, true, 4.0});
    SolverParams p;
    p.rel_gap = 1e-9;
    const PeriodSolve ex = solve_period(inst, ModelKind::adj_m, {}, p, {AdjustableMode::exact});
    const PeriodSolve bnc = solve_period(inst, ModelKind::adj_m, {}, p, {AdjustableMode::bnc});
    ASSERT_EQ(ex.result.status, SolveStatus::optimal);
    if (*ex.result.alpha > 0.75) continue;
    EXPECT_NEAR(ex.result.objective, bnc.result.objective, 1e-4) << seed;
  }
}

TEST(Sweep, MonotoneOnSmallFleet) {
  DayConfig cfg = small_day();
  cfg.sweep_periods = {16, 22};
  for (ModelKind k : {ModelKind::adj_m, ModelKind::adj_w_free}) {
    const auto rows = sweep_risk_cost(cfg, k);
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(sweep_monotonicity_violations(rows), 0u) << to_string(k);
  }
  EXPECT_THROW(sweep_risk_cost(cfg, ModelKind::drcc_w2), std::invalid_argument);
}

TEST(Sweep, ViolationCounting) {
  std::vector<SweepRow> rows(3);
  for (std::size_t i = 0; i < 3; ++i) {
    rows[i].ct = 10.0 + 2.0 * static_cast<double>(i);
    rows[i].status = SolveStatus::optimal;
    rows[i].objective = 5.0 + static_cast<double>(i);
    rows[i].alpha = 0.3;
  }
  EXPECT_EQ(sweep_monotonicity_violations(rows), 0u);
  rows[2].objective = 5.5;  // drops
  rows[1].alpha = 0.35;     // rises
  EXPECT_EQ(sweep_monotonicity_violations(rows), 2u);
  rows[2].status = SolveStatus::time_limit;
  EXPECT_EQ(sweep_monotonicity_violations(rows), 2u);
}

TEST(Sweep, DefaultSelectionIsHourlyFromNineThirty) {
  const DayConfig cfg;
  const auto sel = cfg.sweep_selection();
  ASSERT_EQ(sel.size(), 6u);
  EXPECT_EQ(cfg.profile.times[sel.front()], "09:30");
  EXPECT_EQ(cfg.profile.times[sel.back()], "14:30");
}

TEST(Bench, GapColumn) {
  DayRun a, b;
  PeriodRecord p;
  p.status = SolveStatus::optimal;
  p.wall_seconds = 0.5;
  a.periods = {p, p};
  p.status = SolveStatus::time_limit;
  p.gap = 0.02;
  b.periods = {p, p};
  b.periods[1].gap = 0.04;
  const auto rows = bench_report({a, b});
  EXPECT_FALSE(rows[0].mean_gap.has_value());
  EXPECT_DOUBLE_EQ(rows[0].total_seconds, 1.0);
  EXPECT_EQ(rows[1].limit_hits, 2u);
  EXPECT_NEAR(*rows[1].mean_gap, 0.03, 1e-15);
  std::ostringstream out;
  write_bench_csv(rows, out);
  EXPECT_NE(out.str().find(",N/A,"), std::string::npos);
  EXPECT_NE(out.str().find(",3.0000,"), std::string::npos);
}

TEST(Csv, HeadersAndRowCounts) {
  DayConfig cfg = small_day();
  cfg.periods = {20, 21};
  const DayRun run = run_sequential(cfg, ModelKind::det);
  std::ostringstream s, t, l, o;
  write_schedule_csv(run, s);
  write_temps_csv(run, t);
  write_loads_csv(run, l);
  write_oos_csv(evaluate_out_of_sample(run, cfg), o);
  EXPECT_EQ(first_line(s.str()), "period,unit,on");
  EXPECT_EQ(first_line(t.str()), "period,unit,temp_c");
  EXPECT_EQ(first_line(l.str()), "period,time,fleet_kw,mean_pv_kw,status,objective,alpha,wall_s");
  EXPECT_EQ(first_line(o.str()), "period,set,probability,p95");
  const std::string sched = s.str(), oos = o.str();
  EXPECT_EQ(std::count(sched.begin(), sched.end(), '\n'), 21);
  EXPECT_EQ(std::count(oos.begin(), oos.end(), '\n'), 21);
  EXPECT_NE(l.str().find("\n21,11:40,"), std::string::npos);
}
