#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drcc/formulations.hpp"
#include "drcc/scenario.hpp"
#include "drcc/solver.hpp"
#include "drcc/thermal.hpp"
#include "drcc/verify.hpp"

namespace drcc {

enum class AdjustableMode { exact, bnc };

inline const char* to_string(AdjustableMode m) { return m == AdjustableMode::exact ? "exact" : "bnc"; }

// How the adjustable Wasserstein kinds are solved: as the single model the
// kind names, or as the family of convex pieces.
enum class WassersteinMode { formulation, pieces };

inline const char* to_string(WassersteinMode m) { return m == WassersteinMode::formulation ? "formulation" : "pieces"; }

struct SolveModes {
  AdjustableMode moment = AdjustableMode::bnc;
  WassersteinMode wasserstein = WassersteinMode::formulation;
  bool take_max = false;  // adjustable moment: keep the more expensive branch
};

// Bell-shaped stand-in for a measured clear-sky PV day: 53 ten-minute
// periods from 08:20, peaking at 12:40. The peak is sized to what a
// 100-unit fleet with the default thermal parameters can absorb.
inline PvProfile default_profile() { return synthetic_bell_profile(53, 8 * 60 + 20, 10, 58.0, 12 * 60 + 40, 110.0, 1); }

struct DayConfig {
  FleetModel fleet = identical_fleet(100);
  std::vector<double> x0;  // empty: drawn uniformly from [x0_lo, x0_hi]
  double x0_lo = 23.10, x0_hi = 23.15;
  PvProfile profile = default_profile();
  double frac = 0.15;
  std::size_t n_scenarios = 100;
  std::size_t moment_samples = 10;  // 0 uses the whole in-sample set
  std::size_t n_oos = 1000;
  std::size_t oos_sets = 10;
  std::uint64_t seed = 1;
  AmbiguitySpec ambiguity;
  SigmaMode sigma = SigmaMode::root;
  bool literal_combine = false;
  AdjustableMode moment_mode = AdjustableMode::bnc;
  WassersteinMode wasserstein_mode = WassersteinMode::pieces;
  BuildOptions build;
  SolverParams solver;
  std::vector<std::size_t> periods;  // empty: the whole day
  std::vector<double> ct_grid{10, 12, 14, 16, 18, 20};
  std::vector<std::size_t> sweep_periods;  // empty: hourly from 09:30 to 14:30
  std::size_t sweep_scenarios = 10;
  std::size_t bench_instances = 10;

  DayConfig() {
    ambiguity.alpha = 0.2;
    ambiguity.delta = 0.02;
    ambiguity.gamma1 = 0.0;
    ambiguity.gamma2 = 1.0;
    ambiguity.ct = 10.0;
    solver.time_limit = 60.0;
  }

  SolveModes modes() const { return {moment_mode, wasserstein_mode, literal_combine}; }

  std::vector<double> initial_state() const {
    if (!x0.empty()) {
      if (x0.size() != fleet.size()) throw std::invalid_argument("config: x0 length differs from the fleet size");
      return x0;
    }
    return initial_temperatures(fleet.size(), derive_seed(seed, 0x7E3Bu), x0_lo, x0_hi);
  }

  std::vector<std::size_t> day_periods() const {
    if (!periods.empty()) return periods;
    std::vector<std::size_t> all(profile.periods());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
    return all;
  }

  // Periods whose label falls on hh:30 between 09:30 and 14:30 when the
  // profile carries clock labels; otherwise every sixth period from the
  // seventh on.
  std::vector<std::size_t> sweep_selection() const {
    if (!sweep_periods.empty()) return sweep_periods;
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < profile.periods(); ++t) {
      const std::string& l = profile.times[t];
      if (l.size() == 5 && l[2] == ':' && l.substr(3) == "30" && l >= "09:30" && l <= "14:30") out.push_back(t);
    }
    if (out.empty())
      for (std::size_t t = 7; t < profile.periods(); t += 6) out.push_back(t);
    return out;
  }

  void validate() const {
    fleet.validate();
    ambiguity.validate();
    if (profile.periods() == 0) throw std::invalid_argument("config: profile has no periods");
    if (n_scenarios == 0) throw std::invalid_argument("config: scenarios.n must be positive");
    if (!(frac >= 0.0 && frac < 1.0)) throw std::invalid_argument("config: scenarios.frac must lie in [0,1)");
    if (moment_samples > n_scenarios) throw std::invalid_argument("config: moment_samples exceeds scenarios.n");
    for (std::size_t t : periods)
      if (t >= profile.periods()) throw std::invalid_argument("config: period index beyond the profile");
    for (double c : ct_grid)
      if (!(c > 0.0)) throw std::invalid_argument("config: ct grid values must be positive");
  }
};

inline ScenarioSet in_sample_set(const DayConfig& cfg, std::size_t t, std::size_t n) {
  return generate_period_scenarios(cfg.profile.mean_kw[t], cfg.frac, n, derive_seed(cfg.seed, 1), t);
}

inline std::vector<ScenarioSet> out_of_sample_sets(const DayConfig& cfg, std::size_t set) {
  return generate_uniform_scenarios(cfg.profile, cfg.frac, cfg.n_oos, derive_seed(cfg.seed, 2, set));
}

inline PeriodInstance period_instance(const DayConfig& cfg, std::size_t t, const std::vector<double>& x_prev,
                                      std::size_t n_scenarios = 0) {
  ScenarioSet s = in_sample_set(cfg, t, n_scenarios ? n_scenarios : cfg.n_scenarios);
  std::optional<ScenarioSet> sub;
  if (cfg.moment_samples > 0 && cfg.moment_samples < s.size()) sub = pick_subset(s, cfg.moment_samples, cfg.seed);
  return make_instance(cfg.fleet, x_prev, std::move(s), cfg.ambiguity, t, cfg.sigma, sub ? &*sub : nullptr);
}

struct PeriodSolve {
  Formulation formulation;
  SolveResult result;
  std::vector<int> u;  // rounded schedule, empty without an incumbent
  std::string branch;  // adjustable moment: which branch won
};

namespace harness_detail {

inline std::vector<int> schedule_of(const Formulation& f, const SolveResult& r) {
  std::vector<int> u;
  if (!r.has_incumbent()) return u;
  for (VarRef v : f.u) u.push_back(static_cast<int>(std::lround(r.values[v.id])));
  return u;
}

inline PeriodSolve solve_built(Formulation f, const SolverParams& params) {
  PeriodSolve ps;
  ps.result = solve_mip(f.model, params, f.lazy);
  ps.u = schedule_of(f, ps.result);
  if (ps.result.has_incumbent() && f.alpha) ps.result.alpha = ps.result.values[f.alpha->id];
  ps.formulation = std::move(f);
  return ps;
}

}  // namespace harness_detail

// Adjustable moment model: both analytic branches are solved and combined.
// exact pairs the high-risk SOCP with the low-risk one; bnc replaces the
// high-risk branch by the tangent-cut model on [gamma1/gamma2, 0.75].
// The default keeps the cheaper branch; take_max keeps the more expensive.
inline PeriodSolve solve_adjustable_moment(const PeriodInstance& inst, AdjustableMode mode, const BuildOptions& opt,
                                           const SolverParams& params, bool take_max = false) {
  PeriodInstance local = inst;
  local.ambiguity.adjustable = true;
  local.ambiguity.kind = AmbiguityKind::moment;
  BuildOptions low = opt, high = opt;
  low.moment_branch = BuildOptions::MomentBranch::exact_low;
  high.moment_branch =
      mode == AdjustableMode::exact ? BuildOptions::MomentBranch::exact_high : BuildOptions::MomentBranch::outer;
  std::vector<PeriodSolve> done;
  std::vector<std::string> names;
  Formulation lowf = build_adj_socp2(local, low);
  if (!lowf.empty_branch) {
    done.push_back(harness_detail::solve_built(std::move(lowf), params));
    names.push_back("low");
  }
  const double ratio = local.ambiguity.gamma1 / local.ambiguity.gamma2;
  if (mode == AdjustableMode::exact || ratio <= 0.75) {
    Formulation hf = mode == AdjustableMode::exact ? build_adj_socp1(local, high) : build_adj_socp3(local, high);
    done.push_back(harness_detail::solve_built(std::move(hf), params));
    names.push_back(mode == AdjustableMode::exact ? "high" : "outer");
  }
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < done.size(); ++i) {
    if (!done[i].result.has_incumbent()) continue;
    if (!pick) {
      pick = i;
      continue;
    }
    const double a = done[i].result.objective, b = done[*pick].result.objective;
    if (take_max ? a > b : a < b) pick = i;
  }
  if (!pick) {
    PeriodSolve none;
    none.result.status = SolveStatus::infeasible;
    for (const PeriodSolve& d : done)
      if (d.result.status == SolveStatus::time_limit) none.result.status = SolveStatus::time_limit;
    none.formulation = done.empty() ? build_detail::skeleton(local, opt, "adj-m") : done.front().formulation;
    return none;
  }
  PeriodSolve out = std::move(done[*pick]);
  out.branch = names[*pick];
  // Wall time and effort cover both branches.
  for (std::size_t i = 0; i < done.size(); ++i) {
    if (i == *pick) continue;
    out.result.wall_seconds += done[i].result.wall_seconds;
    out.result.nodes += done[i].result.nodes;
    out.result.lp_iterations += done[i].result.lp_iterations;
  }
  return out;
}

// Adjustable Wasserstein model solved piece by piece (see build_adj_w_piece).
// Each piece is pruned against the best objective found so far; all pieces
// share one time budget.
inline PeriodSolve solve_adjustable_wasserstein_pieces(const PeriodInstance& inst, const BuildOptions& opt,
                                                      const SolverParams& params) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::size_t N = inst.sorted.size();
  std::optional<PeriodSolve> best;
  double open_bound = kInf;
  bool limit_hit = false;
  std::size_t nodes = 0, iterations = 0, cuts = 0;
  for (std::size_t j = 1; j <= N && !limit_hit; ++j) {
    for (std::size_t k = j - 1; k < N; ++k) {
      const double left = params.time_limit - std::chrono::duration<double>(Clock::now() - start).count();
      if (left <= 0.0) {
        limit_hit = true;
        open_bound = -kInf;
        break;
      }
      Formulation f = build_adj_w_piece(inst, j, k, opt);
      if (f.infeasible_reason) {
        PeriodSolve none;
        none.result.status = SolveStatus::infeasible;
        none.formulation = std::move(f);
        return none;
      }
      SolverParams p = params;
      p.time_limit = left;
      if (best) {
        const double ub = best->result.objective;
        p.objective_cutoff = ub - std::max(params.abs_gap, params.rel_gap * std::max(std::abs(ub), 1e-10));
      }
      PeriodSolve ps = harness_detail::solve_built(std::move(f), p);
      nodes += ps.result.nodes;
      iterations += ps.result.lp_iterations;
      cuts += ps.result.cuts;
      if (ps.result.status == SolveStatus::time_limit || ps.result.status == SolveStatus::feasible_gap) {
        open_bound = std::min(open_bound, ps.result.bound);
        limit_hit = limit_hit || ps.result.status == SolveStatus::time_limit;
      }
      if (ps.result.has_incumbent() && (!best || ps.result.objective < best->result.objective)) {
        ps.branch = "piece " + std::to_string(j) + "," + std::to_string(k);
        best = std::move(ps);
      }
    }
  }
  PeriodSolve out;
  if (best) out = std::move(*best);
  else out.formulation = build_adj_w_piece(inst, 1, N - 1, opt);
  SolveResult& r = out.result;
  r.nodes = nodes;
  r.lp_iterations = iterations;
  r.cuts = cuts;
  r.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!best) {
    r.status = open_bound < kInf ? SolveStatus::time_limit : SolveStatus::infeasible;
    r.bound = open_bound;
    return out;
  }
  r.bound = std::min(r.objective, open_bound);
  r.gap = relative_gap(r.objective, r.bound);
  const double tol = std::max(params.abs_gap, params.rel_gap * std::max(std::abs(r.objective), 1e-10));
  if (r.objective - r.bound <= tol)
    r.status = SolveStatus::optimal;
  else
    r.status = limit_hit ? SolveStatus::time_limit : SolveStatus::feasible_gap;
  return out;
}

inline PeriodSolve solve_period(const PeriodInstance& inst, ModelKind kind, const BuildOptions& opt,
                                const SolverParams& params, const SolveModes& modes = {}) {
  if (kind == ModelKind::adj_m) return solve_adjustable_moment(inst, modes.moment, opt, params, modes.take_max);
  if ((kind == ModelKind::adj_w_bigm || kind == ModelKind::adj_w_free) &&
      modes.wasserstein == WassersteinMode::pieces) {
    PeriodInstance local = inst;
    local.ambiguity.adjustable = true;
    return solve_adjustable_wasserstein_pieces(local, opt, params);
  }
  return harness_detail::solve_built(build_formulation(kind, inst, opt), params);
}

struct PeriodRecord {
  std::size_t period = 0;
  std::string label;
  SolveStatus status = SolveStatus::infeasible;
  double objective = kInf, bound = -kInf, gap = kInf, wall_seconds = 0.0;
  std::size_t nodes = 0;
  std::optional<double> alpha;
  std::string branch;
  double load = 0.0;
  double mean_pv = 0.0;
  bool fallback = false;  // no incumbent; previous schedule held
  std::string note;
  std::vector<int> u;
  std::vector<double> x_prev, x;
};

struct DayRun {
  ModelKind kind = ModelKind::det;
  std::uint64_t seed = 0;
  std::vector<PeriodRecord> periods;

  std::size_t solved() const {
    std::size_t c = 0;
    for (const PeriodRecord& p : periods) c += p.status == SolveStatus::optimal;
    return c;
  }
  std::size_t fallbacks() const {
    std::size_t c = 0;
    for (const PeriodRecord& p : periods) c += p.fallback;
    return c;
  }
  double total_wall() const {
    double s = 0.0;
    for (const PeriodRecord& p : periods) s += p.wall_seconds;
    return s;
  }
};

inline BuildOptions period_options(const DayConfig& cfg, std::size_t t) {
  BuildOptions o = cfg.build;
  o.pv_known = cfg.profile.total(t);
  return o;
}

// Receding-horizon day: each period starts from the temperatures realized
// by the previous period's schedule.
inline DayRun run_sequential(const DayConfig& cfg, ModelKind kind, std::ostream* log = nullptr) {
  if (kind == ModelKind::fleet_size) throw std::invalid_argument("run_sequential: fleet-size is not a per-period model");
  cfg.validate();
  DayRun run;
  run.kind = kind;
  run.seed = cfg.seed;
  std::vector<double> x = cfg.initial_state();
  std::vector<int> held(cfg.fleet.size(), 0);
  for (std::size_t t : cfg.day_periods()) {
    const PeriodInstance inst = period_instance(cfg, t, x);
    PeriodSolve ps = solve_period(inst, kind, period_options(cfg, t), cfg.solver, cfg.modes());
    PeriodRecord rec;
    rec.period = t;
    rec.label = cfg.profile.times.at(t);
    rec.status = ps.result.status;
    rec.objective = ps.result.objective;
    rec.bound = ps.result.bound;
    rec.gap = ps.result.gap;
    rec.wall_seconds = ps.result.wall_seconds;
    rec.nodes = ps.result.nodes;
    rec.alpha = ps.result.alpha;
    rec.branch = ps.branch;
    rec.mean_pv = cfg.profile.total(t);
    rec.x_prev = x;
    if (ps.u.empty()) {
      rec.fallback = true;
      rec.note = ps.formulation.infeasible_reason.value_or("no incumbent within the limits");
      rec.u = held;
      if (log)
        *log << "period " << t + 1 << " (" << rec.label << "): " << to_string(rec.status) << ", holding previous schedule: "
             << rec.note << '\n';
    } else {
      rec.u = ps.u;
    }
    for (std::size_t l = 0; l < cfg.fleet.size(); ++l) {
      x[l] = step_temperature(cfg.fleet.buildings[l], x[l], rec.u[l]);
      rec.load += cfg.fleet.buildings[l].P * rec.u[l];
    }
    rec.x = x;
    held = rec.u;
    if (log && cfg.solver.verbosity >= 1)
      *log << "period " << t + 1 << " " << rec.label << " " << to_string(rec.status) << " obj " << rec.objective << " load "
           << rec.load << " t " << rec.wall_seconds << "s\n";
    run.periods.push_back(std::move(rec));
  }
  return run;
}

// Nearest-rank percentile: the ceil(q n)-th smallest value.
inline double nearest_rank(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("nearest_rank: empty sample");
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()) - 1e-12));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

struct EvalReport {
  std::vector<std::size_t> periods;
  std::vector<std::vector<double>> probability;  // [period index][set]
  std::vector<double> p95;
  std::size_t comfort_violations = 0;
};

inline std::size_t comfort_violations(const DayRun& run, const FleetModel& fleet, double tol = 1e-9) {
  std::size_t c = 0;
  for (const PeriodRecord& p : run.periods)
    for (double x : p.x) c += (x < fleet.x_min - tol || x > fleet.x_max + tol);
  return c;
}

// sets[s][t] is the s-th evaluation set for profile period t.
inline EvalReport evaluate_out_of_sample(const DayRun& run, const std::vector<std::vector<ScenarioSet>>& sets,
                                         const FleetModel& fleet) {
  EvalReport r;
  for (const PeriodRecord& p : run.periods) {
    std::vector<double> probs;
    for (const auto& day : sets) probs.push_back(out_of_sample_probability(p.load, day.at(p.period)));
    r.periods.push_back(p.period);
    r.p95.push_back(nearest_rank(probs, 0.95));
    r.probability.push_back(std::move(probs));
  }
  r.comfort_violations = comfort_violations(run, fleet);
  return r;
}

inline EvalReport evaluate_out_of_sample(const DayRun& run, const DayConfig& cfg) {
  std::vector<std::future<std::vector<ScenarioSet>>> jobs;
  for (std::size_t s = 0; s < cfg.oos_sets; ++s)
    jobs.push_back(std::async(std::launch::async, [&cfg, s] { return out_of_sample_sets(cfg, s); }));
  std::vector<std::vector<ScenarioSet>> sets;
  for (auto& j : jobs) sets.push_back(j.get());
  return evaluate_out_of_sample(run, sets, cfg.fleet);
}

struct SweepRow {
  std::size_t period = 0;
  std::string label;
  double ct = 0.0;
  SolveStatus status = SolveStatus::infeasible;
  double objective = kInf;
  std::optional<double> alpha;
};

// Each selected period is solved from the configured initial state, once per
// grid value; grid points run concurrently.
inline std::vector<SweepRow> sweep_risk_cost(const DayConfig& cfg, ModelKind kind) {
  if (!is_adjustable(kind)) throw std::invalid_argument("sweep: needs an adjustable model kind");
  cfg.validate();
  const std::vector<double> x0 = cfg.initial_state();
  std::vector<SweepRow> rows;
  for (std::size_t t : cfg.sweep_selection()) {
    const PeriodInstance base = period_instance(cfg, t, x0, cfg.sweep_scenarios);
    std::vector<std::future<SweepRow>> jobs;
    for (double ct : cfg.ct_grid) {
      jobs.push_back(std::async(std::launch::async, [&, ct] {
        PeriodInstance inst = base;
        inst.ambiguity.ct = ct;
        PeriodSolve ps = solve_period(inst, kind, period_options(cfg, t), cfg.solver, cfg.modes());
        SweepRow r;
        r.period = t;
        r.label = cfg.profile.times.at(t);
        r.ct = ct;
        r.status = ps.result.status;
        r.objective = ps.result.objective;
        r.alpha = ps.result.alpha;
        return r;
      }));
    }
    for (auto& j : jobs) rows.push_back(j.get());
  }
  return rows;
}

// Counts adjacent grid pairs (per period) where the objective drops or
// alpha rises as the risk cost grows.
inline std::size_t sweep_monotonicity_violations(const std::vector<SweepRow>& rows, double obj_tol = 1e-6,
                                                 double alpha_tol = 1e-6) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const SweepRow &a = rows[i - 1], &b = rows[i];
    if (a.period != b.period || !(b.ct > a.ct)) continue;
    if (a.status != SolveStatus::optimal || b.status != SolveStatus::optimal) {
      ++bad;
      continue;
    }
    if (b.objective < a.objective - obj_tol * std::max(1.0, std::abs(a.objective))) ++bad;
    if (a.alpha && b.alpha && *b.alpha > *a.alpha + alpha_tol) ++bad;
  }
  return bad;
}

struct BenchRow {
  std::size_t instance = 0;
  std::string kind;
  double total_seconds = 0.0;
  std::size_t limit_hits = 0;
  std::optional<double> mean_gap;  // over the periods that hit the limit
  std::size_t fallbacks = 0;
};

inline std::vector<BenchRow> bench_report(const std::vector<DayRun>& runs) {
  std::vector<BenchRow> out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    BenchRow b;
    b.instance = i + 1;
    b.kind = to_string(runs[i].kind);
    double gap_sum = 0.0;
    for (const PeriodRecord& p : runs[i].periods) {
      b.total_seconds += p.wall_seconds;
      if (p.status == SolveStatus::time_limit) {
        ++b.limit_hits;
        if (std::isfinite(p.gap)) gap_sum += p.gap;
      }
      b.fallbacks += p.fallback;
    }
    if (b.limit_hits) b.mean_gap = gap_sum / static_cast<double>(b.limit_hits);
    out.push_back(b);
  }
  return out;
}

// Independent in-sample sets per instance; the remaining settings are shared.
inline std::vector<DayRun> bench_runs(const DayConfig& cfg, ModelKind kind, std::ostream* log = nullptr) {
  std::vector<DayRun> runs;
  for (std::size_t i = 0; i < cfg.bench_instances; ++i) {
    DayConfig c = cfg;
    c.seed = derive_seed(cfg.seed, 0xBE7C, i);
    runs.push_back(run_sequential(c, kind, log));
  }
  return runs;
}

// Per-period oracle re-check of a recorded run against freshly rebuilt
// instances. Fallback periods are reported as failures.
inline std::vector<OracleVerdict> verify_run(const DayConfig& cfg, const DayRun& run, double tol = 1e-6) {
  std::vector<OracleVerdict> out;
  for (const PeriodRecord& p : run.periods) {
    if (p.fallback) {
      out.push_back({false, 0.0, "period " + std::to_string(p.period + 1) + ": no schedule (" + p.note + ")"});
      continue;
    }
    const PeriodInstance inst = period_instance(cfg, p.period, p.x_prev);
    const auto th = thermal_outcome(inst, p.u);
    if (!th) {
      out.push_back({false, -1.0, "period " + std::to_string(p.period + 1) + ": schedule leaves the comfort band"});
      continue;
    }
    BuildOptions opt = period_options(cfg, p.period);
    if (run.kind == ModelKind::adj_m && cfg.moment_mode == AdjustableMode::exact)
      opt.moment_branch = BuildOptions::MomentBranch::exact_high;
    const ScheduleCheck c = check_schedule(inst, run.kind, th->load, opt);
    std::ostringstream why;
    bool ok = c.feasible;
    if (!c.feasible) why << "DR condition fails at load " << th->load << "; ";
    double expected = th->cost + c.extra_cost;
    if (p.alpha && c.alpha) {
      if (*p.alpha < *c.alpha - 1e-7) {
        ok = false;
        why << "reported alpha " << *p.alpha << " below the admissible minimum " << *c.alpha << "; ";
      }
      expected = th->cost + inst.ambiguity.ct * *p.alpha;
    }
    const double scale = std::max(1.0, std::abs(expected));
    if (std::abs(p.objective - expected) > tol * scale) {
      ok = false;
      why << "objective " << p.objective << " vs recomputed " << expected << "; ";
    }
    for (std::size_t l = 0; l < p.x.size(); ++l)
      if (std::abs(p.x[l] - th->x[l]) > 1e-9) {
        ok = false;
        why << "temperature of unit " << l << " off the recursion; ";
        break;
      }
    const std::string head = "period " + std::to_string(p.period + 1) + ": ";
    out.push_back({ok, ok ? 0.0 : -1.0, head + (ok ? "ok" : why.str())});
  }
  return out;
}

// ---- CSV writers ----

inline void write_schedule_csv(const DayRun& run, std::ostream& out) {
  out << "period,unit,on\n";
  for (const PeriodRecord& p : run.periods)
    for (std::size_t l = 0; l < p.u.size(); ++l) out << p.period + 1 << ',' << l + 1 << ',' << p.u[l] << '\n';
}

inline void write_temps_csv(const DayRun& run, std::ostream& out) {
  out << "period,unit,temp_c\n";
  char buf[40];
  for (const PeriodRecord& p : run.periods)
    for (std::size_t l = 0; l < p.x.size(); ++l) {
      std::snprintf(buf, sizeof buf, "%.10g", p.x[l]);
      out << p.period + 1 << ',' << l + 1 << ',' << buf << '\n';
    }
}

inline void write_loads_csv(const DayRun& run, std::ostream& out) {
  out << "period,time,fleet_kw,mean_pv_kw,status,objective,alpha,wall_s\n";
  char buf[200];
  for (const PeriodRecord& p : run.periods) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%.10g,%.10g,%s,%.10g,%s,%.4f\n", p.period + 1, p.label.c_str(), p.load,
                  p.mean_pv, to_string(p.status), p.objective,
                  p.alpha ? std::to_string(*p.alpha).c_str() : "", p.wall_seconds);
    out << buf;
  }
}

inline void write_oos_csv(const EvalReport& r, std::ostream& out) {
  out << "period,set,probability,p95\n";
  for (std::size_t i = 0; i < r.periods.size(); ++i)
    for (std::size_t s = 0; s < r.probability[i].size(); ++s)
      out << r.periods[i] + 1 << ',' << s + 1 << ',' << r.probability[i][s] << ',' << r.p95[i] << '\n';
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "period,time,ct,status,alpha,one_minus_alpha,objective\n";
  char buf[200];
  for (const SweepRow& r : rows) {
    const double a = r.alpha.value_or(std::nan(""));
    std::snprintf(buf, sizeof buf, "%zu,%s,%g,%s,%.10g,%.10g,%.10g\n", r.period + 1, r.label.c_str(), r.ct,
                  to_string(r.status), a, 1.0 - a, r.objective);
    out << buf;
  }
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "instance,kind,cpu_s,limit_hits,mean_gap_pct,fallbacks\n";
  char buf[200];
  for (const BenchRow& b : rows) {
    std::string gap = "N/A";
    if (b.mean_gap) {
      char g[32];
      std::snprintf(g, sizeof g, "%.4f", 100.0 * *b.mean_gap);
      gap = g;
    }
    std::snprintf(buf, sizeof buf, "%zu,%s,%.3f,%zu,%s,%zu\n", b.instance, b.kind.c_str(), b.total_seconds,
                  b.limit_hits, gap.c_str(), b.fallbacks);
    out << buf;
  }
}

}  // namespace drcc
