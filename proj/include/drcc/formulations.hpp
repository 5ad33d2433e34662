#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "drcc/model_ir.hpp"
#include "drcc/scenario.hpp"
#include "drcc/solver.hpp"
#include "drcc/thermal.hpp"

namespace drcc {

struct PeriodInstance {
  FleetModel fleet;
  std::vector<double> x_prev;
  ScenarioSet scenarios;
  SortedScenarios sorted;
  MomentSummary moments;
  AmbiguitySpec ambiguity;
  std::size_t period = 0;

  double max_load() const { return fleet.max_load(); }
  void validate() const {
    fleet.validate();
    ambiguity.validate();
    if (x_prev.size() != fleet.size()) throw std::invalid_argument("instance: x_prev has the wrong length");
    for (double x : x_prev)
      if (!(x >= fleet.x_min - 1e-9 && x <= fleet.x_max + 1e-9))
        throw std::invalid_argument("instance: initial temperature outside the comfort band");
    if (scenarios.size() == 0) throw std::invalid_argument("instance: no scenarios");
    if (sorted.size() != scenarios.size()) throw std::invalid_argument("instance: sorted totals out of date");
  }
};

// Moments default to the full scenario set; pass a subset to mimic a
// small-sample moment estimate.
inline PeriodInstance make_instance(FleetModel fleet, std::vector<double> x_prev, ScenarioSet scenarios,
                                    AmbiguitySpec ambiguity, std::size_t period = 0,
                                    SigmaMode sigma_mode = SigmaMode::root,
                                    const ScenarioSet* moment_sample = nullptr) {
  PeriodInstance inst;
  inst.fleet = std::move(fleet);
  inst.x_prev = std::move(x_prev);
  inst.scenarios = std::move(scenarios);
  inst.sorted = sort_totals(inst.scenarios, inst.fleet);
  inst.moments = empirical_moments(moment_sample ? *moment_sample : inst.scenarios, sigma_mode);
  inst.ambiguity = ambiguity;
  inst.period = period;
  return inst;
}

struct BuildOptions {
  bool strengthen = true;
  // Per-unit rows beta >= beta_off + (beta_on - beta_off) u. They hold at
  // every integer point and make the LP relaxation price each unit linearly.
  bool hull_rows = true;
  // Integrality hint on the number of units switched on.
  bool count_hint = true;
  double moment_alpha_floor = 1e-4;
  double pv_known = 0.0;  // deterministic model only
  enum class MomentBranch { exact_high, exact_low, outer } moment_branch = MomentBranch::outer;
};

struct Formulation {
  Model model;
  std::vector<VarRef> u, x, beta;
  std::optional<VarRef> alpha, eta;
  std::vector<CutGenerator> lazy;
  std::optional<std::string> infeasible_reason;
  bool empty_branch = false;
};

struct BigMSet {
  std::vector<double> m1;   // by sorted index n = 1..N (stored at n-1)
  std::vector<double> m2;   // n = 1..k+1
  std::vector<double> mcc;  // by sorted index
  std::vector<double> m3;   // by sorted index
  double lambda_upper = 0.0;
};

class AssumptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline BigMSet big_m_values(const SortedScenarios& s, double alpha, double delta) {
  if (!check_assumption1(s))
    throw AssumptionError("largest fleet load does not exceed the smallest PV total; the DR constraint is infeasible");
  if (!(delta > 0.0)) throw std::invalid_argument("big_m_values: delta must be positive");
  const std::size_t n = s.size();
  const std::size_t k = risk_index(alpha, n);
  BigMSet b;
  b.lambda_upper = 1.0 / delta;
  for (std::size_t i = 1; i <= n; ++i) {
    const double p = s.at(i);
    b.m1.push_back(std::max(std::abs(s.p0 - p), p));
    b.mcc.push_back(p);
    b.m3.push_back(b.lambda_upper * b.m1.back());
  }
  for (std::size_t i = 1; i <= std::min(k + 1, n); ++i) b.m2.push_back(std::max(s.at(i) - s.at(k + 1), 0.0));
  return b;
}

inline double omega_coefficient(double gamma1, double gamma2, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("omega_coefficient: alpha must lie in (0,1)");
  if (gamma1 < 0.0 || gamma2 < std::max(gamma1, 1.0))
    throw std::invalid_argument("omega_coefficient: need gamma1 >= 0 and gamma2 >= max(gamma1, 1)");
  if (gamma1 / gamma2 <= alpha) return std::sqrt(gamma1) + std::sqrt((1.0 - alpha) * (gamma2 - gamma1) / alpha);
  return std::sqrt(gamma2 / alpha);
}

// Greedy optimum of the CVaR dual: weight 1/N on the k largest gaps, the
// remainder alpha - k/N on the next one.
inline std::vector<double> dual_pi(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("dual_pi: alpha must lie in (0,1)");
  const std::size_t k = risk_index(alpha, n);
  std::vector<double> pi(n, 0.0);
  for (std::size_t i = 0; i < std::min(k, n); ++i) pi[i] = 1.0 / static_cast<double>(n);
  if (k < n) pi[k] = alpha - static_cast<double>(k) / static_cast<double>(n);
  return pi;
}

namespace build_detail {

inline std::string idx(const std::string& base, std::size_t i) { return base + "_" + std::to_string(i); }

inline LinearExpr load_expr(const Formulation& f, const FleetModel& fleet) {
  LinearExpr e;
  for (std::size_t l = 0; l < f.u.size(); ++l) e.add(f.u[l], fleet.buildings[l].P);
  return e;
}

// Shared per-period skeleton: switching, temperatures, comfort deviation.
inline Formulation skeleton(const PeriodInstance& inst, const BuildOptions& opt, const std::string& name) {
  inst.validate();
  Formulation f;
  Model& m = f.model;
  m.name = name;
  m.period = static_cast<int>(inst.period);
  const FleetModel& fl = inst.fleet;
  std::vector<Term> count;
  for (std::size_t l = 0; l < fl.size(); ++l) {
    const BuildingParams& b = fl.buildings[l];
    VarRef u = m.add_binary(idx("u", l));
    VarRef x = m.add_continuous(idx("x", l), fl.x_min, fl.x_max);
    VarRef beta = m.add_continuous(idx("beta", l), 0.0, kInf);
    f.u.push_back(u);
    f.x.push_back(x);
    f.beta.push_back(beta);
    const double drift = b.A * inst.x_prev[l] + b.disturbance();
    m.add_row(LinearExpr(x).add(u, -b.B), Sense::eq, drift, idx("thermal", l));
    m.add_row(LinearExpr(x).add(beta, -1.0), Sense::le, fl.x_ref, idx("absdev_hi", l));
    m.add_row(LinearExpr(x, -1.0).add(beta, -1.0), Sense::le, -fl.x_ref, idx("absdev_lo", l));
    if (opt.hull_rows) {
      const double off = std::abs(drift - fl.x_ref), on = std::abs(drift + b.B - fl.x_ref);
      m.add_row(LinearExpr(beta).add(u, -(on - off)), Sense::ge, off, idx("hull", l));
    }
    m.add_objective(beta, fl.c_sys);
    m.add_objective(u, fl.c_switch);
    count.push_back({u, 1.0});
  }
  if (opt.count_hint) m.add_integral(count, "units_on");
  return f;
}

inline void mark_infeasible(Formulation& f, const std::string& why) {
  f.infeasible_reason = why;
  f.model.add_row(LinearExpr(), Sense::ge, 1.0, "dr_infeasible");
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace build_detail

inline Formulation build_deterministic(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  require(opt.pv_known >= 0.0, "deterministic: known PV must be >= 0");
  Formulation f = skeleton(inst, opt, "det");
  Model& m = f.model;
  VarRef eta = m.add_continuous("eta", 0.0, kInf);
  f.eta = eta;
  const LinearExpr load = load_expr(f, inst.fleet);
  m.add_row(LinearExpr(load).add(eta, -1.0), Sense::le, opt.pv_known, "pv_mismatch_hi");
  m.add_row(LinearExpr(load).add(eta, 1.0), Sense::ge, opt.pv_known, "pv_mismatch_lo");
  m.add_objective(eta, inst.fleet.c_pv);
  return f;
}

inline Formulation build_cc_saa(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  require(!inst.ambiguity.adjustable, "cc: needs a fixed risk level");
  Formulation f = skeleton(inst, opt, "cc");
  Model& m = f.model;
  const LinearExpr load = load_expr(f, inst.fleet);
  const ScenarioSet& s = inst.scenarios;
  std::vector<VarRef> rho(s.size());
  LinearExpr budget;
  for (std::size_t n = 0; n < s.size(); ++n) {
    rho[n] = m.add_binary(idx("rho", n));
    // Big-M equal to the scenario total: at rho = 1 the row reads load >= 0.
    m.add_row(LinearExpr(load).add(rho[n], s.totals[n]), Sense::ge, s.totals[n], idx("cc_scen", n));
    budget.add(rho[n], s.probabilities[n]);
  }
  m.add_row(budget, Sense::le, inst.ambiguity.alpha, "cc_budget");
  if (opt.strengthen) {
    // Covering a larger total covers every smaller one, so violations can be
    // taken in order of decreasing total without losing optimal loads.
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      m.add_row(LinearExpr(rho[inst.sorted.order[i + 1]]).add(rho[inst.sorted.order[i]], -1.0), Sense::le, 0.0,
                idx("cc_order", i));
    std::vector<Term> cnt;
    for (VarRef r : rho) cnt.push_back({r, 1.0});
    m.add_integral(cnt, "violations");
  }
  return f;
}

inline Formulation build_drcc_moment(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::moment && !a.adjustable, "drcc-m: needs moment ambiguity with a fixed risk level");
  Formulation f = skeleton(inst, opt, "drcc-m");
  const double omega = omega_coefficient(a.gamma1, a.gamma2, a.alpha);
  f.model.add_row(load_expr(f, inst.fleet), Sense::ge, inst.moments.theta + omega * inst.moments.sigma, "moment_cover");
  return f;
}

inline Formulation build_drcc_w_milp1(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::wasserstein && !a.adjustable, "drcc-w1: needs Wasserstein ambiguity, fixed risk");
  Formulation f = skeleton(inst, opt, "drcc-w1");
  if (!check_assumption1(inst.sorted)) {
    mark_infeasible(f, "largest fleet load does not exceed the smallest PV total");
    return f;
  }
  Model& m = f.model;
  const BigMSet bm = big_m_values(inst.sorted, a.alpha, a.delta);
  const LinearExpr load = load_expr(f, inst.fleet);
  const std::size_t N = inst.sorted.size();
  VarRef gamma = m.add_continuous("gamma", 0.0, kInf);
  LinearExpr head(gamma, a.alpha);
  std::vector<VarRef> ys;
  for (std::size_t n = 1; n <= N; ++n) {
    VarRef z = m.add_continuous(idx("z", n), -kInf, 0.0);
    VarRef s = m.add_continuous(idx("s", n), 0.0, kInf);
    VarRef y = m.add_binary(idx("y", n));
    ys.push_back(y);
    const double M = bm.m1[n - 1], P = inst.sorted.at(n);
    head.add(z, 1.0 / static_cast<double>(N));
    m.add_row(LinearExpr(z).add(gamma, 1.0).add(s, -1.0), Sense::le, 0.0, idx("w1lin_gap", n));
    m.add_row(LinearExpr(s).add(load, -1.0).add(y, M), Sense::le, M - P, idx("w1lin_act", n));
    m.add_row(LinearExpr(s).add(y, -M), Sense::le, 0.0, idx("w1lin_ind", n));
  }
  m.add_row(head, Sense::ge, a.delta, "w1_radius");
  // Totals are sorted descending, so a gap that is open at n is open at n+1.
  if (opt.strengthen)
    for (std::size_t n = 0; n + 1 < N; ++n)
      m.add_row(LinearExpr(ys[n]).add(ys[n + 1], -1.0), Sense::le, 0.0, idx("w1_order", n + 1));
  return f;
}

inline Formulation build_drcc_w_milp2(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::wasserstein && !a.adjustable, "drcc-w2: needs Wasserstein ambiguity, fixed risk");
  const std::size_t N = inst.sorted.size();
  const std::size_t k = risk_index(a.alpha, N);
  require(k + 1 <= N, "drcc-w2: risk level too large for the sample size (k+1 > N)");
  Formulation f = skeleton(inst, opt, opt.strengthen ? "drcc-w2s" : "drcc-w2");
  if (!check_assumption1(inst.sorted)) {
    mark_infeasible(f, "largest fleet load does not exceed the smallest PV total");
    return f;
  }
  Model& m = f.model;
  const BigMSet bm = big_m_values(inst.sorted, a.alpha, a.delta);
  const LinearExpr load = load_expr(f, inst.fleet);
  LinearExpr head;
  std::vector<VarRef> h;
  for (std::size_t n = 1; n <= k + 1; ++n) {
    VarRef an = m.add_continuous(idx("a", n), 0.0, kInf);
    const double weight = n <= k ? 1.0 / static_cast<double>(N) : a.alpha - static_cast<double>(k) / static_cast<double>(N);
    head.add(an, weight);
    const double P = inst.sorted.at(n);
    if (opt.strengthen && n == k + 1) {
      m.add_row(LinearExpr(an).add(load, -1.0), Sense::eq, -P, idx("w2lin_last", n));
      continue;
    }
    VarRef hn = m.add_binary(idx("h", n));
    h.push_back(hn);
    const double M2 = bm.m2[n - 1], M = bm.m1[n - 1];
    m.add_row(LinearExpr(an).add(load, -1.0).add(hn, M2), Sense::le, M2 - P, idx("w2lin_act", n));
    m.add_row(LinearExpr(an).add(hn, -M), Sense::le, 0.0, idx("w2lin_ind", n));
  }
  m.add_row(head, Sense::ge, a.delta, "w2_radius");
  if (opt.strengthen)
    for (std::size_t i = 0; i + 1 < h.size(); ++i)
      m.add_row(LinearExpr(h[i]).add(h[i + 1], -1.0), Sense::le, 0.0, idx("w2_order", i + 1));
  return f;
}

namespace build_detail {

inline Formulation adjustable_skeleton(const PeriodInstance& inst, const BuildOptions& opt, const std::string& name,
                                       double alpha_lo, double alpha_hi) {
  Formulation f = skeleton(inst, opt, name);
  VarRef alpha = f.model.add_continuous("alpha", alpha_lo, alpha_hi);
  f.alpha = alpha;
  f.model.add_objective(alpha, inst.ambiguity.ct);
  return f;
}

// alpha * phi >= q^2, phi >= w^2 and q * w >= 1 together give phi >= 1/sqrt(alpha).
inline void add_inverse_root_cones(Model& m, VarRef alpha, VarRef phi, VarRef q, VarRef w) {
  m.add_cone({LinearExpr(alpha) - LinearExpr(phi), LinearExpr(q, 2.0)}, LinearExpr(alpha) + LinearExpr(phi),
             "cone_alpha_phi");
  m.add_cone({LinearExpr(phi) - 1.0, LinearExpr(w, 2.0)}, LinearExpr(phi) + 1.0, "cone_phi_w");
  m.add_cone({LinearExpr(q) - LinearExpr(w), LinearExpr(2.0)}, LinearExpr(q) + LinearExpr(w), "cone_q_w");
}

}  // namespace build_detail

// Exact branch for alpha >= gamma1/gamma2 (quadratic load term through g_ij).
inline Formulation build_adj_socp1(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::moment, "adj-m: needs moment ambiguity");
  const double lo = std::max(a.gamma1 / a.gamma2, opt.moment_alpha_floor);
  Formulation f = adjustable_skeleton(inst, opt, "adj-m-socp1", lo, 1.0);
  Model& m = f.model;
  const FleetModel& fl = inst.fleet;
  const double theta = inst.moments.theta, sigma = inst.moments.sigma;
  const double rg1 = std::sqrt(a.gamma1);
  const std::size_t L = fl.size();
  VarRef d = m.add_continuous("d", 0.0, kInf);
  const VarRef alpha = *f.alpha;
  m.add_cone({LinearExpr(2.0 * sigma * std::sqrt(a.gamma2 - a.gamma1)), LinearExpr(alpha) - LinearExpr(d)},
             LinearExpr(alpha) + LinearExpr(d), "cone_variance");
  // d <= (load - theta - sigma sqrt(g1))^2 + (g2 - g1) sigma^2, with load^2 = P . g
  LinearExpr quad(d);
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      const std::string nm = "g_" + std::to_string(i) + "_" + std::to_string(j);
      VarRef g = m.add_continuous(nm, 0.0, 1.0);
      quad.add(g, -fl.buildings[i].P * fl.buildings[j].P);
      m.add_row(LinearExpr(g).add(f.u[i], -1.0).add(f.u[j], -1.0), Sense::ge, -1.0, "gmc_lo_" + nm);
      m.add_row(LinearExpr(g).add(f.u[i], -1.0), Sense::le, 0.0, "gmc_i_" + nm);
      if (i != j) m.add_row(LinearExpr(g).add(f.u[j], -1.0), Sense::le, 0.0, "gmc_j_" + nm);
    }
  }
  const LinearExpr load = load_expr(f, fl);
  quad.add(load, 2.0 * (theta + sigma * rg1));
  m.add_row(quad, Sense::le, theta * theta + 2.0 * theta * sigma * rg1 + a.gamma2 * sigma * sigma, "quad_load");
  m.add_row(load, Sense::ge, theta + sigma * rg1, "moment_floor");
  return f;
}

// Exact branch for alpha < gamma1/gamma2; empty when gamma1 = 0.
inline Formulation build_adj_socp2(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::moment, "adj-m: needs moment ambiguity");
  const double hi = a.gamma1 / a.gamma2;
  const double lo = opt.moment_alpha_floor;
  if (!(hi > lo)) {
    Formulation f = skeleton(inst, opt, "adj-m-socp2");
    f.empty_branch = true;
    mark_infeasible(f, "risk interval below gamma1/gamma2 is empty");
    return f;
  }
  Formulation f = adjustable_skeleton(inst, opt, "adj-m-socp2", lo, hi);
  Model& m = f.model;
  VarRef phi = m.add_continuous("phi", 0.0, kInf);
  VarRef q = m.add_continuous("q", 0.0, kInf);
  VarRef w = m.add_continuous("w", 0.0, kInf);
  m.add_row(load_expr(f, inst.fleet).add(phi, -inst.moments.sigma * std::sqrt(a.gamma2)), Sense::ge,
            inst.moments.theta, "moment_cover");
  add_inverse_root_cones(m, *f.alpha, phi, q, w);
  return f;
}

// r >= sqrt((1-a)/a) is convex on (0, 0.75]; this is its tangent at a_hat.
struct TangentCut {
  double slope;
  double intercept;
  double at(double alpha) const { return slope * alpha + intercept; }
};

inline TangentCut risk_tangent(double a_hat) {
  if (!(a_hat > 0.0 && a_hat < 1.0)) throw std::invalid_argument("risk_tangent: alpha must lie in (0,1)");
  const double inv = 1.0 / std::sqrt(1.0 - a_hat);
  return {-0.5 * inv * std::pow(a_hat, -1.5), inv * std::pow(a_hat, -0.5) * (1.5 - a_hat)};
}

inline double risk_ratio_root(double alpha) { return std::sqrt((1.0 - alpha) / alpha); }

// Outer approximation for gamma1/gamma2 <= alpha <= 0.75, tightened by lazy
// tangent cuts at incumbents.
inline Formulation build_adj_socp3(const PeriodInstance& inst, const BuildOptions& opt = {}, double cut_tol = 1e-7) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::moment, "adj-m: needs moment ambiguity");
  const double lo = std::max(a.gamma1 / a.gamma2, opt.moment_alpha_floor);
  require(lo <= 0.75, "adj-m: gamma1/gamma2 exceeds 0.75, outer branch is empty");
  Formulation f = adjustable_skeleton(inst, opt, "adj-m-socp3", lo, 0.75);
  Model& m = f.model;
  VarRef r = m.add_continuous("r", 0.0, kInf);
  VarRef phi = m.add_continuous("phi", 0.0, kInf);
  VarRef q = m.add_continuous("q", 0.0, kInf);
  VarRef w = m.add_continuous("w", 0.0, kInf);
  const double sigma = inst.moments.sigma;
  m.add_row(load_expr(f, inst.fleet).add(r, -sigma * std::sqrt(a.gamma2 - a.gamma1)), Sense::ge,
            inst.moments.theta + sigma * std::sqrt(a.gamma1), "moment_cover");
  m.add_row(LinearExpr(r, 2.0).add(phi, -1.0), Sense::ge, 0.0, "r_phi");
  add_inverse_root_cones(m, *f.alpha, phi, q, w);
  const VarRef alpha = *f.alpha;
  f.lazy.push_back([alpha, r, cut_tol](std::span<const double> p) {
    std::vector<LinearConstraint> cuts;
    const double ah = std::clamp(p[alpha.id], 1e-12, 1.0 - 1e-12);
    const double need = risk_ratio_root(ah);
    if (p[r.id] >= need - cut_tol * std::max(1.0, need)) return cuts;
    const TangentCut t = risk_tangent(ah);
    cuts.push_back({"risk_tangent", {{r, 1.0}, {alpha, -t.slope}}, Sense::ge, t.intercept});
    return cuts;
  });
  return f;
}

// Big-M reformulation with lambda = 1/gamma and w_l = lambda u_l.
inline Formulation build_adj_w_milp3(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::wasserstein, "adj-w-bigm: needs Wasserstein ambiguity");
  const std::size_t N = inst.sorted.size();
  Formulation f = adjustable_skeleton(inst, opt, "adj-w-bigm", 1.0 / static_cast<double>(N), 1.0);
  if (!check_assumption1(inst.sorted)) {
    mark_infeasible(f, "largest fleet load does not exceed the smallest PV total");
    return f;
  }
  Model& m = f.model;
  // Only M1, M3 and the lambda bound are used here; none depends on alpha.
  const BigMSet bm = big_m_values(inst.sorted, 0.5, a.delta);
  // lambda = 0 would admit alpha = 1 at any load. The best lambda for a
  // given load is 1/gap for some positive gap <= P^(0), so excluding
  // (0, 1/P^(0)) loses nothing else.
  VarRef lambda = m.add_continuous("lambda", 1.0 / inst.sorted.p0, bm.lambda_upper);
  LinearExpr weighted;  // sum_l P_l w_l
  for (std::size_t l = 0; l < f.u.size(); ++l)
    weighted.add(mccormick_product(m, f.u[l], lambda, bm.lambda_upper, idx("lw", l)), inst.fleet.buildings[l].P);
  LinearExpr head = LinearExpr(lambda, a.delta).add(*f.alpha, -1.0);
  for (std::size_t n = 1; n <= N; ++n) {
    VarRef z = m.add_continuous(idx("z", n), -kInf, 0.0);
    VarRef s = m.add_continuous(idx("s", n), 0.0, kInf);
    VarRef y = m.add_binary(idx("y", n));
    head.add(z, -1.0 / static_cast<double>(N));
    const double M = bm.m3[n - 1], P = inst.sorted.at(n);
    m.add_row(LinearExpr(z).add(s, -1.0), Sense::le, -1.0, idx("w3lin_gap", n));
    m.add_row(LinearExpr(s).add(weighted, -1.0).add(lambda, P).add(y, M), Sense::le, M, idx("w3lin_act", n));
    m.add_row(LinearExpr(s).add(y, -M), Sense::le, 0.0, idx("w3lin_ind", n));
  }
  m.add_row(head, Sense::le, 0.0, "w3_radius");
  return f;
}

// Big-M free reformulation over (j, k) pairs: j brackets the load between
// consecutive sorted totals, k brackets N alpha.
inline Formulation build_adj_w_milp4(const PeriodInstance& inst, const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::wasserstein, "adj-w-free: needs Wasserstein ambiguity");
  const std::size_t N = inst.sorted.size();
  const double Nd = static_cast<double>(N);
  Formulation f = adjustable_skeleton(inst, opt, "adj-w-free", 1.0 / Nd, 1.0);
  if (!check_assumption1(inst.sorted)) {
    mark_infeasible(f, "largest fleet load does not exceed the smallest PV total");
    return f;
  }
  Model& m = f.model;
  const SortedScenarios& s = inst.sorted;
  const FleetModel& fl = inst.fleet;
  const VarRef alpha = *f.alpha;
  const LinearExpr load = load_expr(f, fl);
  LinearExpr head, pick, k_lo, k_hi, load_lo, load_hi;
  std::vector<Term> pick_hint;
  for (std::size_t j = 1; j <= N; ++j) {
    for (std::size_t k = j - 1; k <= N - 1; ++k) {
      const std::string jk = std::to_string(j) + "_" + std::to_string(k);
      VarRef D = m.add_binary("D_" + jk);
      VarRef eps = m.add_continuous("eps_" + jk, 0.0, 1.0);
      const double Pk1 = s.at(k + 1), shift = static_cast<double>(j - 1) / Nd;
      double gaps = 0.0;
      for (std::size_t i = j; i <= k; ++i) gaps += Pk1 - s.at(i);
      head.add(D, -gaps / Nd - Pk1 * shift);
      head.add(eps, Pk1);
      pick.add(D, 1.0);
      pick_hint.push_back({D, 1.0});
      k_lo.add(D, static_cast<double>(k));
      k_hi.add(D, static_cast<double>(k + 1));
      load_lo.add(D, s.at(j));
      load_hi.add(D, s.at(j - 1));
      m.add_row(LinearExpr(eps).add(D, -1.0), Sense::le, 0.0, "eps_d_" + jk);
      m.add_row(LinearExpr(eps).add(alpha, -1.0), Sense::le, 0.0, "eps_a_" + jk);
      m.add_row(LinearExpr(eps).add(alpha, -1.0).add(D, -1.0), Sense::ge, -1.0, "eps_ad_" + jk);
      for (std::size_t l = 0; l < fl.size(); ++l) {
        const std::string ljk = std::to_string(l) + "_" + jk;
        VarRef o = m.add_continuous("o_" + ljk, 0.0, 1.0);
        VarRef tau = m.add_continuous("tau_" + ljk, 0.0, 1.0);
        const double P = fl.buildings[l].P;
        head.add(o, -P);
        head.add(tau, P * shift);
        m.add_row(LinearExpr(o).add(eps, -1.0), Sense::le, 0.0, "o_e_" + ljk);
        m.add_row(LinearExpr(o).add(f.u[l], -1.0), Sense::le, 0.0, "o_u_" + ljk);
        m.add_row(LinearExpr(o).add(eps, -1.0).add(f.u[l], -1.0), Sense::ge, -1.0, "o_eu_" + ljk);
        m.add_row(LinearExpr(tau).add(D, -1.0), Sense::le, 0.0, "tau_d_" + ljk);
        m.add_row(LinearExpr(tau).add(f.u[l], -1.0), Sense::le, 0.0, "tau_u_" + ljk);
        m.add_row(LinearExpr(tau).add(D, -1.0).add(f.u[l], -1.0), Sense::ge, -1.0, "tau_du_" + ljk);
      }
    }
  }
  m.add_row(head, Sense::le, -a.delta, "w4_radius");
  m.add_row(pick, Sense::eq, 1.0, "w4_pick");
  m.add_row(LinearExpr(k_lo).add(alpha, -Nd), Sense::le, 0.0, "w4_alpha_lo");
  m.add_row(LinearExpr(k_hi).add(alpha, -Nd), Sense::ge, 0.0, "w4_alpha_hi");
  m.add_row(LinearExpr(load_lo) - load, Sense::le, 0.0, "w4_load_lo");
  m.add_row(LinearExpr(load_hi) - load, Sense::ge, 0.0, "w4_load_hi");
  return f;
}

// One convex piece of the adjustable Wasserstein condition. With gaps from
// position j on counted at full weight up to k and the remainder on k+1,
// the condition reads (alpha - (j-1)/N)(load - P(k+1)) >= delta +
// (1/N) sum_{n=j..k} (P(n) - P(k+1)). Every piece is a sufficient condition
// for any load and the union over 1 <= j <= k+1 <= N is the exact feasible
// set, so the smallest optimum over all pieces is the adjustable optimum.
inline Formulation build_adj_w_piece(const PeriodInstance& inst, std::size_t j, std::size_t k,
                                     const BuildOptions& opt = {}) {
  using namespace build_detail;
  const AmbiguitySpec& a = inst.ambiguity;
  require(a.kind == AmbiguityKind::wasserstein, "adj-w piece: needs Wasserstein ambiguity");
  const std::size_t N = inst.sorted.size();
  if (j < 1 || j > k + 1 || k + 1 > N) throw std::invalid_argument("adj-w piece: need 1 <= j <= k+1 <= N");
  const double Nd = static_cast<double>(N);
  const std::string tag = "adj-w-piece-" + std::to_string(j) + "-" + std::to_string(k);
  Formulation f = adjustable_skeleton(inst, opt, tag, 1.0 / Nd, 1.0);
  if (!check_assumption1(inst.sorted)) {
    mark_infeasible(f, "largest fleet load does not exceed the smallest PV total");
    return f;
  }
  Model& m = f.model;
  const double pk = inst.sorted.at(k + 1);
  double rhs = a.delta;
  for (std::size_t n = j; n <= k; ++n) rhs += (inst.sorted.at(n) - pk) / Nd;
  const LinearExpr shifted = LinearExpr(*f.alpha) - static_cast<double>(j - 1) / Nd;
  const LinearExpr margin = load_expr(f, inst.fleet) - pk;
  m.add_row(margin, Sense::ge, 0.0, "piece_margin");
  m.add_cone({LinearExpr(2.0 * std::sqrt(rhs)), shifted - margin}, shifted + margin, "piece_cone");
  return f;
}

struct FleetSizeFormulation {
  Model model;
  std::vector<VarRef> zeta;
  VarRef fleet_size;
  std::vector<std::vector<VarRef>> u, x, beta;  // [period][unit]
  std::optional<std::string> infeasible_reason;
};

// Multi-period model that also picks which of the first N_U units join the
// fleet. Excluded units sit at the set-point in every period.
inline FleetSizeFormulation build_fleet_size(const std::vector<PeriodInstance>& periods, std::size_t n_units,
                                             double unit_cost, const BuildOptions& opt = {}) {
  using build_detail::idx;
  if (periods.empty()) throw std::invalid_argument("fleet-size: no periods");
  if (n_units == 0) throw std::invalid_argument("fleet-size: N_U must be at least 1");
  const FleetModel& fl = periods.front().fleet;
  if (n_units > fl.size()) throw std::invalid_argument("fleet-size: N_U exceeds the configured fleet");
  const AmbiguityKind kind = periods.front().ambiguity.kind;
  for (const PeriodInstance& p : periods) {
    if (p.ambiguity.kind != kind) throw std::invalid_argument("fleet-size: ambiguity kinds differ across periods");
    if (p.ambiguity.adjustable) throw std::invalid_argument("fleet-size: needs a fixed risk level");
    if (p.fleet.size() != fl.size()) throw std::invalid_argument("fleet-size: periods must share the fleet");
  }
  FleetSizeFormulation f;
  Model& m = f.model;
  m.name = "fleet-size";
  const std::size_t T = periods.size();
  const double ref = fl.x_ref;
  std::vector<Term> zeta_count;
  for (std::size_t l = 0; l < n_units; ++l) {
    f.zeta.push_back(m.add_binary(idx("zeta", l)));
    zeta_count.push_back({f.zeta.back(), 1.0});
  }
  f.fleet_size = m.add_continuous("n_hvac", 0.0, static_cast<double>(n_units));
  m.add_objective(f.fleet_size, unit_cost);
  f.u.resize(T);
  f.x.resize(T);
  f.beta.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<Term> on;
    for (std::size_t l = 0; l < n_units; ++l) {
      const BuildingParams& b = fl.buildings[l];
      const std::string tl = std::to_string(t) + "_" + std::to_string(l);
      VarRef u = m.add_binary("u_" + tl);
      VarRef x = m.add_continuous("x_" + tl, fl.x_min, fl.x_max);
      VarRef beta = m.add_continuous("beta_" + tl, 0.0, kInf);
      f.u[t].push_back(u);
      f.x[t].push_back(x);
      f.beta[t].push_back(beta);
      const VarRef zeta = f.zeta[l];
      if (t == 0) {
        const double x0 = periods.front().x_prev[l];
        m.add_row(LinearExpr(x).add(zeta, -(b.A * x0 + b.disturbance() - ref)).add(u, -b.B), Sense::eq, ref,
                  "thermal_" + tl);
      } else {
        m.add_row(LinearExpr(x)
                      .add(f.x[t - 1][l], -b.A)
                      .add(zeta, -(b.A * ref + b.disturbance() - ref))
                      .add(u, -b.B),
                  Sense::eq, ref - b.A * ref, "thermal_" + tl);
      }
      m.add_row(LinearExpr(x).add(beta, -1.0), Sense::le, ref, "absdev_hi_" + tl);
      m.add_row(LinearExpr(x, -1.0).add(beta, -1.0), Sense::le, -ref, "absdev_lo_" + tl);
      m.add_objective(beta, fl.c_sys);
      m.add_objective(u, fl.c_switch);
      on.push_back({u, 1.0});
    }
    if (opt.count_hint) m.add_integral(on, idx("units_on", t));
  }
  for (std::size_t l = 0; l < n_units; ++l) {
    LinearExpr sum;
    for (std::size_t t = 0; t < T; ++t) sum.add(f.u[t][l], 1.0);
    m.add_row(LinearExpr(f.zeta[l]) - sum, Sense::le, 0.0, idx("member_lo", l));
    m.add_row(LinearExpr(sum).add(f.zeta[l], -static_cast<double>(T)), Sense::le, 0.0, idx("member_hi", l));
  }
  LinearExpr cap;
  for (VarRef z : f.zeta) cap.add(z, 1.0);
  m.add_row(LinearExpr(cap).add(f.fleet_size, -1.0), Sense::le, 0.0, "fleet_cap");
  if (opt.count_hint) m.add_integral(zeta_count, "members");

  for (std::size_t t = 0; t < T; ++t) {
    const PeriodInstance& p = periods[t];
    const AmbiguitySpec& a = p.ambiguity;
    LinearExpr load;
    double p0 = 0.0;
    for (std::size_t l = 0; l < n_units; ++l) {
      load.add(f.u[t][l], fl.buildings[l].P);
      p0 += fl.buildings[l].P;
    }
    const std::string tag = "_t" + std::to_string(t);
    if (kind == AmbiguityKind::moment) {
      m.add_row(load, Sense::ge, p.moments.theta + omega_coefficient(a.gamma1, a.gamma2, a.alpha) * p.moments.sigma,
                "moment_cover" + tag);
      continue;
    }
    const SortedScenarios s = sort_totals(p.scenarios, p0);
    if (!check_assumption1(s)) {
      f.infeasible_reason = "period " + std::to_string(t) + ": candidate fleet cannot exceed the smallest PV total";
      m.add_row(LinearExpr(), Sense::ge, 1.0, "dr_infeasible" + tag);
      continue;
    }
    const std::size_t N = s.size(), k = risk_index(a.alpha, N);
    if (k + 1 > N) throw std::invalid_argument("fleet-size: risk level too large for the sample size");
    const BigMSet bm = big_m_values(s, a.alpha, a.delta);
    LinearExpr head;
    std::vector<VarRef> h;
    for (std::size_t n = 1; n <= k + 1; ++n) {
      VarRef an = m.add_continuous(idx("a", n) + tag, 0.0, kInf);
      head.add(an, n <= k ? 1.0 / static_cast<double>(N) : a.alpha - static_cast<double>(k) / static_cast<double>(N));
      if (n == k + 1) {
        m.add_row(LinearExpr(an) - load, Sense::eq, -s.at(n), idx("w2lin_last", n) + tag);
        continue;
      }
      VarRef hn = m.add_binary(idx("h", n) + tag);
      h.push_back(hn);
      m.add_row(LinearExpr(an).add(load, -1.0).add(hn, bm.m2[n - 1]), Sense::le, bm.m2[n - 1] - s.at(n),
                idx("w2lin_act", n) + tag);
      m.add_row(LinearExpr(an).add(hn, -bm.m1[n - 1]), Sense::le, 0.0, idx("w2lin_ind", n) + tag);
    }
    m.add_row(head, Sense::ge, a.delta, "w2_radius" + tag);
    for (std::size_t i = 0; i + 1 < h.size(); ++i)
      m.add_row(LinearExpr(h[i]).add(h[i + 1], -1.0), Sense::le, 0.0, idx("w2_order", i + 1) + tag);
  }
  return f;
}

enum class ModelKind { det, cc, drcc_m, drcc_w1, drcc_w2, adj_m, adj_w_bigm, adj_w_free, fleet_size };

inline ModelKind parse_kind(const std::string& s) {
  if (s == "det") return ModelKind::det;
  if (s == "cc") return ModelKind::cc;
  if (s == "drcc-m") return ModelKind::drcc_m;
  if (s == "drcc-w1") return ModelKind::drcc_w1;
  if (s == "drcc-w2") return ModelKind::drcc_w2;
  if (s == "adj-m") return ModelKind::adj_m;
  if (s == "adj-w-bigm") return ModelKind::adj_w_bigm;
  if (s == "adj-w-free") return ModelKind::adj_w_free;
  if (s == "fleet-size") return ModelKind::fleet_size;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::det: return "det";
    case ModelKind::cc: return "cc";
    case ModelKind::drcc_m: return "drcc-m";
    case ModelKind::drcc_w1: return "drcc-w1";
    case ModelKind::drcc_w2: return "drcc-w2";
    case ModelKind::adj_m: return "adj-m";
    case ModelKind::adj_w_bigm: return "adj-w-bigm";
    case ModelKind::adj_w_free: return "adj-w-free";
    case ModelKind::fleet_size: return "fleet-size";
  }
  return "?";
}

inline bool is_adjustable(ModelKind k) {
  return k == ModelKind::adj_m || k == ModelKind::adj_w_bigm || k == ModelKind::adj_w_free;
}

inline AmbiguityKind ambiguity_for(ModelKind k) {
  switch (k) {
    case ModelKind::drcc_m:
    case ModelKind::adj_m: return AmbiguityKind::moment;
    default: return AmbiguityKind::wasserstein;
  }
}

// Single-period builder dispatch. For adj-m the branch is picked by
// opt.moment_branch; the harness combines branches.
inline Formulation build_formulation(ModelKind kind, const PeriodInstance& inst, const BuildOptions& opt = {}) {
  PeriodInstance local = inst;
  local.ambiguity.adjustable = is_adjustable(kind);
  if (kind != ModelKind::det && kind != ModelKind::cc) local.ambiguity.kind = ambiguity_for(kind);
  switch (kind) {
    case ModelKind::det: return build_deterministic(local, opt);
    case ModelKind::cc: return build_cc_saa(local, opt);
    case ModelKind::drcc_m: return build_drcc_moment(local, opt);
    case ModelKind::drcc_w1: return build_drcc_w_milp1(local, opt);
    case ModelKind::drcc_w2: return build_drcc_w_milp2(local, opt);
    case ModelKind::adj_m:
      switch (opt.moment_branch) {
        case BuildOptions::MomentBranch::exact_high: return build_adj_socp1(local, opt);
        case BuildOptions::MomentBranch::exact_low: return build_adj_socp2(local, opt);
        case BuildOptions::MomentBranch::outer: return build_adj_socp3(local, opt);
      }
      break;
    case ModelKind::adj_w_bigm: return build_adj_w_milp3(local, opt);
    case ModelKind::adj_w_free: return build_adj_w_milp4(local, opt);
    case ModelKind::fleet_size: throw std::invalid_argument("fleet-size is a multi-period model; use build_fleet_size");
  }
  throw std::invalid_argument("unhandled model kind");
}

}  // namespace drcc
