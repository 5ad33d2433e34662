#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drcc/formulations.hpp"
#include "drcc/solver.hpp"

namespace drcc {

struct OracleVerdict {
  bool feasible = false;
  double slack = 0.0;
  std::string detail;
};

inline OracleVerdict make_verdict(double slack, std::string detail) {
  return {slack >= -1e-9, slack, std::move(detail)};
}

// Left-hand side of the sorted-gap condition: weight 1/N on the k smallest
// gaps max(load - P(n), 0), the fractional remainder on gap k+1. Valid for
// alpha in (0, 1]; at alpha = 1 every gap gets 1/N.
inline double wasserstein_lhs(double load, const SortedScenarios& s, double alpha) {
  const std::size_t N = s.size();
  const double Nd = static_cast<double>(N);
  const std::size_t k = std::min(risk_index(alpha, N), N);
  double lhs = 0.0;
  for (std::size_t n = 1; n <= k; ++n) lhs += std::max(load - s.at(n), 0.0) / Nd;
  if (k < N) lhs += (alpha - static_cast<double>(k) / Nd) * std::max(load - s.at(k + 1), 0.0);
  return lhs;
}

inline OracleVerdict wasserstein_feasible(double load, const SortedScenarios& s, double alpha, double delta) {
  if (!check_assumption1(s)) return {false, -delta, "largest fleet load does not exceed the smallest PV total"};
  const double lhs = wasserstein_lhs(load, s, alpha);
  char buf[160];
  std::snprintf(buf, sizeof buf, "load %.6g: sorted-gap value %.10g vs radius %.10g", load, lhs, delta);
  return make_verdict(lhs - delta, buf);
}

inline OracleVerdict moment_feasible(double load, double theta, double sigma, double omega) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "load %.6g vs threshold %.10g", load, theta + omega * sigma);
  return make_verdict(load - theta - omega * sigma, buf);
}

inline double out_of_sample_probability(double load, const ScenarioSet& s) {
  if (s.size() == 0) return 0.0;
  std::size_t covered = 0;
  for (double total : s.totals)
    if (load >= total) ++covered;
  return static_cast<double>(covered) / static_cast<double>(s.size());
}

// Primal CVaR LP at a fixed load: min -(1/N) sum z - alpha gamma subject to
// z_n + gamma <= gap_n, z <= 0, gamma >= 0. Its optimum is minus the
// sorted-gap value.
inline Model cvar_primal_lp(double load, const SortedScenarios& s, double alpha) {
  Model m;
  m.name = "cvar-primal";
  const std::size_t N = s.size();
  VarRef gamma = m.add_continuous("gamma", 0.0, kInf);
  m.add_objective(gamma, -alpha);
  for (std::size_t n = 1; n <= N; ++n) {
    VarRef z = m.add_continuous("z_" + std::to_string(n), -kInf, 0.0);
    m.add_objective(z, -1.0 / static_cast<double>(N));
    m.add_row(LinearExpr(z).add(gamma, 1.0), Sense::le, std::max(load - s.at(n), 0.0), "gap_" + std::to_string(n));
  }
  return m;
}

// Dual objective -sum pi_n gap_n evaluated at the greedy weights.
inline double cvar_dual_value(double load, const SortedScenarios& s, double alpha) {
  const std::vector<double> pi = dual_pi(s.size(), alpha);
  double v = 0.0;
  for (std::size_t n = 1; n <= s.size(); ++n) v -= pi[n - 1] * std::max(load - s.at(n), 0.0);
  return v;
}

// Exact per-unit thermal outcome of a schedule; nothing when a unit leaves
// the comfort band.
struct ThermalOutcome {
  double cost = 0.0;
  double load = 0.0;
  std::vector<double> x;
};

inline std::optional<ThermalOutcome> thermal_outcome(const PeriodInstance& inst, const std::vector<int>& u) {
  const FleetModel& fl = inst.fleet;
  ThermalOutcome out;
  for (std::size_t l = 0; l < fl.size(); ++l) {
    const double x = step_temperature(fl.buildings[l], inst.x_prev[l], u[l]);
    if (x < fl.x_min - 1e-9 || x > fl.x_max + 1e-9) return std::nullopt;
    out.x.push_back(x);
    out.cost += fl.c_sys * comfort_deviation(x, fl.x_ref) + fl.c_switch * u[l];
    out.load += fl.buildings[l].P * u[l];
  }
  return out;
}

namespace verify_detail {

// Omega extended to alpha = 1 (where the upper branch gives sqrt(gamma1)).
inline double omega_closed(double g1, double g2, double alpha) {
  if (g1 / g2 <= alpha) return std::sqrt(g1) + std::sqrt(std::max(0.0, (1.0 - alpha) * (g2 - g1) / alpha));
  return std::sqrt(g2 / alpha);
}

// Smallest alpha in [lo, hi] with theta + omega(alpha) sigma <= load, or
// nothing. Omega is non-increasing in alpha, so bisection is exact up to
// the tolerance.
inline std::optional<double> min_moment_alpha(double load, double theta, double sigma, double g1, double g2, double lo,
                                              double hi) {
  auto ok = [&](double a) { return theta + omega_closed(g1, g2, a) * sigma <= load + 1e-12; };
  if (!ok(hi)) return std::nullopt;
  if (ok(lo)) return lo;
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double mid = 0.5 * (a + b);
    (ok(mid) ? b : a) = mid;
  }
  return b;
}

// Smallest alpha in [lo, 1] with the sorted-gap value >= delta. The value is
// continuous and non-decreasing in alpha and linear between the knots k/N,
// so each segment is solved in closed form.
inline std::optional<double> min_wasserstein_alpha(double load, const SortedScenarios& s, double delta, double lo) {
  const std::size_t N = s.size();
  const double Nd = static_cast<double>(N);
  if (wasserstein_lhs(load, s, 1.0) < delta) return std::nullopt;
  if (wasserstein_lhs(load, s, lo) >= delta) return lo;
  double base = 0.0;  // value at alpha = k/N
  for (std::size_t k = 0; k < N; ++k) {
    const double gap = std::max(load - s.at(k + 1), 0.0);
    const double a0 = static_cast<double>(k) / Nd, a1 = static_cast<double>(k + 1) / Nd;
    if (a1 >= lo && base + gap / Nd >= delta && gap > 0.0) {
      const double a = std::max(a0 + (delta - base) / gap, lo);
      if (a <= a1 + 1e-15) return std::min(a, a1);
    }
    base += gap / Nd;
  }
  return 1.0;
}

}  // namespace verify_detail

// Extra objective and DR verdict for a fixed schedule; the adjustable kinds
// also report the cheapest admissible risk level.
struct ScheduleCheck {
  bool feasible = false;
  double extra_cost = 0.0;
  std::optional<double> alpha;
};

inline ScheduleCheck check_schedule(const PeriodInstance& inst, ModelKind kind, double load, const BuildOptions& opt = {}) {
  const AmbiguitySpec& a = inst.ambiguity;
  ScheduleCheck c;
  switch (kind) {
    case ModelKind::det:
      c.feasible = true;
      c.extra_cost = inst.fleet.c_pv * std::abs(load - opt.pv_known);
      return c;
    case ModelKind::cc: {
      double miss = 0.0;
      for (std::size_t n = 0; n < inst.scenarios.size(); ++n)
        if (load < inst.scenarios.totals[n]) miss += inst.scenarios.probabilities[n];
      c.feasible = miss <= a.alpha + 1e-12;
      return c;
    }
    case ModelKind::drcc_m:
      c.feasible = moment_feasible(load, inst.moments.theta, inst.moments.sigma,
                                   omega_coefficient(a.gamma1, a.gamma2, a.alpha))
                       .feasible;
      return c;
    case ModelKind::drcc_w1:
    case ModelKind::drcc_w2:
      c.feasible = wasserstein_feasible(load, inst.sorted, a.alpha, a.delta).feasible;
      return c;
    case ModelKind::adj_m: {
      const double hi = opt.moment_branch == BuildOptions::MomentBranch::outer ? 0.75 : 1.0;
      auto al = verify_detail::min_moment_alpha(load, inst.moments.theta, inst.moments.sigma, a.gamma1, a.gamma2,
                                                opt.moment_alpha_floor, hi);
      if (!al) return c;
      c.feasible = true;
      c.alpha = *al;
      c.extra_cost = a.ct * *al;
      return c;
    }
    case ModelKind::adj_w_bigm:
    case ModelKind::adj_w_free: {
      if (!check_assumption1(inst.sorted)) return c;
      auto al = verify_detail::min_wasserstein_alpha(load, inst.sorted, a.delta,
                                                     1.0 / static_cast<double>(inst.sorted.size()));
      if (!al) return c;
      c.feasible = true;
      c.alpha = *al;
      c.extra_cost = a.ct * *al;
      return c;
    }
    case ModelKind::fleet_size: break;
  }
  throw std::invalid_argument("check_schedule: unsupported kind");
}

inline constexpr std::size_t kBruteForceLimit = 20;

// Exhaustive optimum over all 2^N_HVAC schedules. values holds the optimal
// schedule (one entry per unit), not a model-space assignment.
inline SolveResult brute_force_optimum(const PeriodInstance& inst, ModelKind kind, const BuildOptions& opt = {}) {
  const std::size_t L = inst.fleet.size();
  if (L > kBruteForceLimit) throw std::invalid_argument("brute_force_optimum: more than 20 units");
  SolveResult best;
  best.status = SolveStatus::infeasible;
  std::vector<int> u(L, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
    for (std::size_t l = 0; l < L; ++l) u[l] = static_cast<int>((mask >> l) & 1U);
    const auto th = thermal_outcome(inst, u);
    if (!th) continue;
    const ScheduleCheck c = check_schedule(inst, kind, th->load, opt);
    if (!c.feasible) continue;
    const double obj = th->cost + c.extra_cost;
    if (obj < best.objective - 1e-12) {
      best.objective = obj;
      best.values.assign(u.begin(), u.end());
      best.alpha = c.alpha;
      best.status = SolveStatus::optimal;
    }
  }
  best.bound = best.objective;
  best.gap = best.status == SolveStatus::optimal ? 0.0 : kInf;
  best.nodes = std::size_t{1} << L;
  return best;
}

// Re-checks an incumbent from solve_mip against the instance: binary
// schedule, exact temperatures, band, deviations, DR condition and the
// reported objective (which must not undercut the schedule's true cost).
inline OracleVerdict recheck(const PeriodInstance& inst, ModelKind kind, const Formulation& f, const SolveResult& r,
                             const BuildOptions& opt = {}, double tol = 1e-6) {
  if (!r.has_incumbent()) return {false, 0.0, "no incumbent"};
  std::ostringstream why;
  std::vector<int> u(f.u.size());
  for (std::size_t l = 0; l < f.u.size(); ++l) {
    const double v = r.values[f.u[l].id];
    if (std::abs(v - std::round(v)) > 1e-9) why << "u_" << l << " not binary; ";
    u[l] = static_cast<int>(std::lround(v));
  }
  const auto th = thermal_outcome(inst, u);
  if (!th) return {false, -1.0, "schedule leaves the comfort band"};
  for (std::size_t l = 0; l < f.u.size(); ++l) {
    const double x = r.values[f.x[l].id], beta = r.values[f.beta[l].id];
    if (std::abs(x - th->x[l]) > tol) why << "x_" << l << " off the recursion; ";
    if (beta + tol < std::abs(th->x[l] - inst.fleet.x_ref)) why << "beta_" << l << " below |x - x_ref|; ";
  }
  const ScheduleCheck c = check_schedule(inst, kind, th->load, opt);
  double slack = c.feasible ? 0.0 : -1.0;
  if (!c.feasible) why << "DR condition fails at load " << th->load << "; ";
  if (f.alpha && c.alpha) {
    const double a = r.values[f.alpha->id];
    const AmbiguitySpec& amb = inst.ambiguity;
    const bool admissible =
        kind == ModelKind::adj_m
            ? inst.moments.theta + verify_detail::omega_closed(amb.gamma1, amb.gamma2, a) * inst.moments.sigma <=
                  th->load + tol * std::max(1.0, th->load)
            : wasserstein_lhs(th->load, inst.sorted, a) >= amb.delta - tol;
    if (!admissible) why << "reported alpha " << a << " is not admissible; ";
  }
  const double true_cost = th->cost + c.extra_cost;
  if (r.objective < true_cost - tol * std::max(1.0, std::abs(true_cost)))
    why << "objective " << r.objective << " undercuts the schedule cost " << true_cost << "; ";
  const std::string detail = why.str();
  if (!detail.empty()) return {false, std::min(slack, -1.0), detail};
  return {true, r.objective - true_cost, "ok"};
}

}  // namespace drcc
