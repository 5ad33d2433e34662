#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "drcc/model_ir.hpp"
#include "drcc/simplex.hpp"

namespace drcc {

enum class Branching { most_fractional, pseudo_cost };

struct SolverParams {
  double abs_gap = 1e-9;
  double rel_gap = 1e-6;
  double int_tol = 1e-6;
  double lp_feas_tol = 1e-8;
  double cone_tol = 1e-8;  // relative to max(1, |cone bound|)
  double time_limit = 100.0;
  std::size_t node_limit = 1000000;
  std::size_t max_cone_cuts = 30;
  Branching branching = Branching::most_fractional;
  std::uint64_t seed = 0;
  int verbosity = 0;
  // Nodes whose bound reaches this value are pruned even before an incumbent
  // exists; with nothing below it the result is infeasible.
  double objective_cutoff = kInf;
};

enum class SolveStatus { optimal, feasible_gap, infeasible, time_limit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible_gap: return "feasible-gap";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::time_limit: return "time-limit";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> values;  // empty when there is no incumbent
  double objective = kInf;     // incumbent value (upper bound)
  double bound = -kInf;        // best lower bound
  double gap = kInf;
  double wall_seconds = 0.0;
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  std::size_t cuts = 0;
  std::optional<double> alpha;

  bool has_incumbent() const { return !values.empty(); }
};

inline double relative_gap(double ub, double lb) { return (ub - lb) / std::max(std::abs(ub), 1e-10); }

// Called with the model-space point of an LP-integral candidate; returns cuts
// that the point violates (empty when it is acceptable).
using CutGenerator = std::function<std::vector<LinearConstraint>(std::span<const double>)>;

struct LpSolution {
  LpStatus status = LpStatus::numerical;
  std::vector<double> values;
  double objective = 0.0;
  std::vector<double> duals;  // one per model row
};

namespace solver_detail {

inline SparseRow to_sparse(const LinearConstraint& c) {
  SparseRow r;
  for (const Term& t : c.terms) {
    r.idx.push_back(t.var.id);
    r.val.push_back(t.coef);
  }
  r.lo = c.sense == Sense::le ? -kInf : c.rhs;
  r.hi = c.sense == Sense::ge ? kInf : c.rhs;
  return r;
}

}  // namespace solver_detail

// LP relaxation (binaries relaxed to their bounds). Cone rows are not allowed.
inline LpSolution solve_lp(const Model& m, SimplexOptions opt = {}) {
  m.validate();
  if (!m.cones().empty()) throw ModelError("solve_lp: model has cone rows; linearize them first");
  std::vector<double> cost(m.num_vars(), 0.0), lo(m.num_vars()), hi(m.num_vars());
  const LinearExpr obj = m.objective();
  for (const Term& t : obj.terms) cost[t.var.id] += t.coef;
  for (std::size_t j = 0; j < m.num_vars(); ++j) {
    lo[j] = m.var(VarRef{j}).lower;
    hi[j] = m.var(VarRef{j}).upper;
  }
  std::vector<SparseRow> rows;
  for (const LinearConstraint& c : m.rows()) rows.push_back(solver_detail::to_sparse(c));
  SimplexEngine lp(cost, lo, hi, rows, opt);
  LpSolution s;
  s.status = lp.solve();
  if (s.status == LpStatus::optimal) {
    s.values = lp.primal();
    s.objective = lp.objective() + obj.constant;
    s.duals = lp.duals();
  }
  return s;
}

namespace solver_detail {

struct BoundChange {
  std::uint32_t col;
  double lo, hi;
};

struct Node {
  double bound;
  std::uint64_t id;
  std::uint32_t depth;
  std::vector<BoundChange> changes;
  std::int64_t branch_col = -1;  // for pseudo-cost bookkeeping
  int branch_dir = 0;
  double parent_frac = 0.0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  using Clock = std::chrono::steady_clock;

  BranchAndBound(const Model& m, const SolverParams& p, const std::vector<CutGenerator>& lazy)
      : model_(m), p_(p), lazy_(lazy) {}

  SolveResult run() {
    start_ = Clock::now();
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(p_.time_limit));
    model_.validate();
    SolveResult res;
    if (!build()) {
      res.status = SolveStatus::infeasible;
      res.wall_seconds = elapsed();
      return res;
    }
    lp_->set_deadline(deadline_);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::optional<Node> current = Node{-kInf, next_id_++, 0, {}};
    bool limit_hit = false;
    double lb = -kInf;

    while (current || !open.empty()) {
      if (Clock::now() > deadline_ || nodes_ >= p_.node_limit) {
        limit_hit = true;
        break;
      }
      if (!current) {
        current = open.top();
        open.pop();
      }
      // Global bound: smallest bound among open nodes, the node in hand, and
      // nodes we could not resolve.
      double frontier = current->bound;
      if (!open.empty()) frontier = std::min(frontier, open.top().bound);
      frontier = std::min(frontier, unresolved_bound_);
      lb = std::max(lb, frontier);
      if (has_incumbent() && gap_closed(lb)) break;
      if (current->bound >= prune_level()) {
        pruned_bound_ = std::min(pruned_bound_, current->bound);
        current.reset();
        continue;
      }

      Node node = std::move(*current);
      current.reset();
      ++nodes_;
      Outcome out = process(node);
      if (out.kind == Outcome::time) {
        limit_hit = true;
        unresolved_bound_ = std::min(unresolved_bound_, node.bound);
        break;
      }
      if (out.kind == Outcome::trouble) {
        unresolved_bound_ = std::min(unresolved_bound_, node.bound);
        continue;
      }
      if (p_.verbosity >= 2)
        std::cerr << "node " << nodes_ << " depth " << node.depth << " lp " << out.value << " ub "
                  << (has_incumbent() ? ub_ : kInf) << " open " << open.size() << '\n';
      if (out.kind != Outcome::branch) continue;

      // Two children; the one in the rounding direction is processed next.
      const double v = out.branch_value;
      const auto col = static_cast<std::uint32_t>(out.branch_col);
      Node down{out.value, next_id_++, node.depth + 1, node.changes, out.branch_col, -1, v - std::floor(v)};
      down.changes.push_back({col, lp_lo(col, node), std::floor(v)});
      Node up{out.value, next_id_++, node.depth + 1, node.changes, out.branch_col, +1, std::ceil(v) - v};
      up.changes.push_back({col, std::ceil(v), lp_hi(col, node)});
      if (v - std::floor(v) >= 0.5) {
        open.push(std::move(down));
        current = std::move(up);
      } else {
        open.push(std::move(up));
        current = std::move(down);
      }
    }

    res.nodes = nodes_;
    res.lp_iterations = lp_->iterations();
    res.cuts = cuts_added_;
    res.wall_seconds = elapsed();
    const bool exhausted = !current && open.empty();
    if (exhausted) {
      lb = std::min(pruned_bound_, unresolved_bound_);
      if (has_incumbent()) lb = std::min(lb, ub_);
    } else {
      double frontier = current ? current->bound : kInf;
      if (!open.empty()) frontier = std::min(frontier, open.top().bound);
      lb = std::max(lb, std::min({frontier, pruned_bound_, unresolved_bound_}));
    }
    if (!has_incumbent()) {
      res.status = (limit_hit || unresolved_bound_ < kInf) ? SolveStatus::time_limit : SolveStatus::infeasible;
      if (!limit_hit && unresolved_bound_ < kInf) res.status = SolveStatus::feasible_gap;
      res.bound = lb;
      return res;
    }
    res.values = best_;
    res.objective = ub_;
    res.bound = std::min(lb, ub_);
    res.gap = relative_gap(ub_, res.bound);
    if (limit_hit && !gap_closed(res.bound))
      res.status = SolveStatus::time_limit;
    else if (gap_closed(res.bound))
      res.status = SolveStatus::optimal;
    else
      res.status = SolveStatus::feasible_gap;
    return res;
  }

 private:
  struct Outcome {
    enum Kind { pruned, integral, branch, trouble, time } kind = pruned;
    double value = 0.0;
    std::int64_t branch_col = -1;
    double branch_value = 0.0;
  };

  const Model& model_;
  SolverParams p_;
  const std::vector<CutGenerator>& lazy_;
  std::optional<SimplexEngine> lp_;
  std::size_t n_model_ = 0, n_total_ = 0;
  double obj_const_ = 0.0;
  std::vector<double> root_lo_, root_hi_;
  std::vector<char> is_int_;
  std::vector<char> touched_;
  std::vector<std::uint32_t> touched_list_;
  std::vector<double> pc_sum_[2];
  std::vector<std::size_t> pc_cnt_[2];
  std::vector<double> best_;
  double ub_ = kInf;
  double pruned_bound_ = kInf;
  double unresolved_bound_ = kInf;
  std::size_t nodes_ = 0, cuts_added_ = 0;
  std::uint64_t next_id_ = 0;
  Clock::time_point start_, deadline_;

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  bool has_incumbent() const { return !best_.empty(); }
  double tolerance() const { return std::max(p_.abs_gap, p_.rel_gap * std::max(std::abs(ub_), 1e-10)); }
  double cutoff() const { return ub_ - tolerance(); }
  bool same_point(const std::vector<double>& a, const std::vector<double>& b) const {
    for (std::size_t j = 0; j < n_model_; ++j)
      if (std::abs(a[j] - b[j]) > 1e-12 * std::max(1.0, std::abs(a[j]))) return false;
    return true;
  }
  double prune_level() const { return has_incumbent() ? std::min(cutoff(), p_.objective_cutoff) : p_.objective_cutoff; }
  bool gap_closed(double lb) const { return ub_ - lb <= tolerance(); }

  double lp_lo(std::uint32_t col, const Node& node) const {
    double v = root_lo_[col];
    for (const BoundChange& c : node.changes)
      if (c.col == col) v = c.lo;
    return v;
  }
  double lp_hi(std::uint32_t col, const Node& node) const {
    double v = root_hi_[col];
    for (const BoundChange& c : node.changes)
      if (c.col == col) v = c.hi;
    return v;
  }

  // Builds the LP over model columns plus one helper column per integrality
  // hint. Singleton rows become bounds; binary bounds are then propagated
  // through the rows. Returns false when presolve proves infeasibility.
  bool build() {
    n_model_ = model_.num_vars();
    const auto& hints = model_.integrals();
    n_total_ = n_model_ + hints.size();
    root_lo_.assign(n_total_, 0.0);
    root_hi_.assign(n_total_, 0.0);
    is_int_.assign(n_total_, 0);
    for (std::size_t j = 0; j < n_model_; ++j) {
      const Variable& v = model_.var(VarRef{j});
      root_lo_[j] = v.lower;
      root_hi_[j] = v.upper;
      is_int_[j] = v.kind == VarKind::binary;
      if (is_int_[j]) {
        root_lo_[j] = std::ceil(root_lo_[j] - p_.int_tol);
        root_hi_[j] = std::floor(root_hi_[j] + p_.int_tol);
      }
    }
    std::vector<double> cost(n_total_, 0.0);
    const LinearExpr obj = model_.objective();
    obj_const_ = obj.constant;
    for (const Term& t : obj.terms) cost[t.var.id] += t.coef;

    std::vector<SparseRow> rows;
    for (const LinearConstraint& c : model_.rows()) {
      SparseRow r = to_sparse(c);
      if (r.idx.empty()) {
        if (r.lo > p_.lp_feas_tol || r.hi < -p_.lp_feas_tol) return false;
        continue;
      }
      if (r.idx.size() == 1) {
        const std::size_t j = r.idx[0];
        const double a = r.val[0];
        double lo = a > 0 ? r.lo / a : r.hi / a;
        double hi = a > 0 ? r.hi / a : r.lo / a;
        root_lo_[j] = std::max(root_lo_[j], lo);
        root_hi_[j] = std::min(root_hi_[j], hi);
        continue;
      }
      rows.push_back(std::move(r));
    }
    for (std::size_t h = 0; h < hints.size(); ++h) {
      SparseRow r;
      double lo = 0.0, hi = 0.0;
      for (const Term& t : hints[h].terms) {
        r.idx.push_back(t.var.id);
        r.val.push_back(t.coef);
        const double a = t.coef * root_lo_[t.var.id], b = t.coef * root_hi_[t.var.id];
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
      const std::size_t col = n_model_ + h;
      r.idx.push_back(col);
      r.val.push_back(-1.0);
      r.lo = r.hi = 0.0;
      root_lo_[col] = std::isfinite(lo) ? std::ceil(lo - p_.int_tol) : -kInf;
      root_hi_[col] = std::isfinite(hi) ? std::floor(hi + p_.int_tol) : kInf;
      is_int_[col] = 1;
      rows.push_back(std::move(r));
    }
    if (!propagate(rows)) return false;
    for (std::size_t j = 0; j < n_total_; ++j)
      if (root_lo_[j] > root_hi_[j] + p_.lp_feas_tol) return false;
    SimplexOptions opt;
    opt.check_tol = p_.lp_feas_tol;
    lp_.emplace(cost, root_lo_, root_hi_, rows, opt);
    touched_.assign(n_total_, 0);
    for (auto& v : pc_sum_) v.assign(n_total_, 0.0);
    for (auto& v : pc_cnt_) v.assign(n_total_, 0);
    return true;
  }

  // Activity-based bound tightening, applied to integer columns only.
  bool propagate(const std::vector<SparseRow>& rows) {
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (const SparseRow& r : rows) {
        double min_act = 0.0, max_act = 0.0;
        int min_inf = 0, max_inf = 0;
        for (std::size_t k = 0; k < r.idx.size(); ++k) {
          const double a = r.val[k], lo = root_lo_[r.idx[k]], hi = root_hi_[r.idx[k]];
          const double mn = a > 0 ? a * lo : a * hi, mx = a > 0 ? a * hi : a * lo;
          if (std::isfinite(mn)) min_act += mn; else ++min_inf;
          if (std::isfinite(mx)) max_act += mx; else ++max_inf;
        }
        if (min_inf == 0 && min_act > r.hi + 1e-6 * std::max(1.0, std::abs(r.hi))) return false;
        if (max_inf == 0 && max_act < r.lo - 1e-6 * std::max(1.0, std::abs(r.lo))) return false;
        for (std::size_t k = 0; k < r.idx.size(); ++k) {
          const std::size_t j = r.idx[k];
          if (!is_int_[j]) continue;
          const double a = r.val[k], lo = root_lo_[j], hi = root_hi_[j];
          const double mn = a > 0 ? a * lo : a * hi, mx = a > 0 ? a * hi : a * lo;
          // Residual activity of the other columns.
          const bool rest_min_ok = min_inf == 0 || (min_inf == 1 && !std::isfinite(mn));
          const bool rest_max_ok = max_inf == 0 || (max_inf == 1 && !std::isfinite(mx));
          const double rest_min = min_act - (std::isfinite(mn) ? mn : 0.0);
          const double rest_max = max_act - (std::isfinite(mx) ? mx : 0.0);
          double new_lo = lo, new_hi = hi;
          if (std::isfinite(r.hi) && rest_min_ok) {
            const double lim = (r.hi - rest_min) / a;  // a x <= hi - rest_min
            if (a > 0) new_hi = std::min(new_hi, std::floor(lim + 1e-7));
            else new_lo = std::max(new_lo, std::ceil(lim - 1e-7));
          }
          if (std::isfinite(r.lo) && rest_max_ok) {
            const double lim = (r.lo - rest_max) / a;  // a x >= lo - rest_max
            if (a > 0) new_lo = std::max(new_lo, std::ceil(lim - 1e-7));
            else new_hi = std::min(new_hi, std::floor(lim + 1e-7));
          }
          if (new_lo > new_hi) return false;
          if (new_lo > lo || new_hi < hi) {
            root_lo_[j] = new_lo;
            root_hi_[j] = new_hi;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    return true;
  }

  void touch(std::uint32_t col) {
    if (!touched_[col]) {
      touched_[col] = 1;
      touched_list_.push_back(col);
    }
  }

  void apply(const Node& node) {
    for (std::uint32_t col : touched_list_) {
      touched_[col] = 0;
      lp_->set_bounds(col, root_lo_[col], root_hi_[col]);
    }
    touched_list_.clear();
    for (const BoundChange& c : node.changes) {
      touch(c.col);
      lp_->set_bounds(c.col, c.lo, c.hi);
    }
  }

  void add_cut(const LinearConstraint& c) {
    lp_->add_row(to_sparse(c));
    ++cuts_added_;
  }

  // Cone cuts violated by x (model space), most violated first.
  std::vector<LinearConstraint> separate_cones(std::span<const double> x) const {
    std::vector<std::pair<double, LinearConstraint>> found;
    for (const SocConstraint& c : model_.cones()) {
      const double s = c.bound.evaluate(x);
      const double tol = p_.cone_tol * std::max(1.0, std::abs(s));
      auto cut = soc_linearization_cut(c, x, tol);
      if (cut) found.push_back({c.violation(x), std::move(*cut)});
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<LinearConstraint> out;
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
  }

  // Column to branch on: integrality hints first, then binaries.
  std::int64_t pick_branch(const std::vector<double>& x, double& value, double tol = -1.0) const {
    if (tol < 0.0) tol = p_.int_tol;
    std::int64_t best = -1;
    double best_score = -1.0;
    auto consider = [&](std::size_t j) {
      const double f = x[j] - std::floor(x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= tol) return;
      double score = dist;
      if (p_.branching == Branching::pseudo_cost && pc_cnt_[0][j] && pc_cnt_[1][j]) {
        const double down = pc_sum_[0][j] / static_cast<double>(pc_cnt_[0][j]) * f;
        const double up = pc_sum_[1][j] / static_cast<double>(pc_cnt_[1][j]) * (1.0 - f);
        score = 1.0 + std::max(down, 1e-6) * std::max(up, 1e-6);
      }
      if (score > best_score + 1e-12) {
        best_score = score;
        best = static_cast<std::int64_t>(j);
      }
    };
    for (std::size_t j = n_model_; j < n_total_; ++j) consider(j);
    if (best >= 0) {
      value = x[static_cast<std::size_t>(best)];
      return best;
    }
    for (std::size_t j = 0; j < n_model_; ++j)
      if (is_int_[j]) consider(j);
    if (best >= 0) value = x[static_cast<std::size_t>(best)];
    return best;
  }

  // Solves the current LP and runs the separation loop. With integral_only
  // the cone loop continues until the point is cone-feasible.
  LpStatus solve_with_cuts(bool& cone_ok, std::size_t& budget_used, bool force_integral) {
    for (;;) {
      const LpStatus st = lp_->solve();
      if (st != LpStatus::optimal) return st;
      const std::vector<double> x = lp_->primal();
      const std::span<const double> xm(x.data(), n_model_);
      double dummy = 0.0;
      const bool fractional = !force_integral && pick_branch(x, dummy) >= 0;
      std::vector<LinearConstraint> cuts = separate_cones(xm);
      cone_ok = cuts.empty();
      if (cone_ok) return st;
      const std::size_t cap = fractional ? p_.max_cone_cuts : 50 * p_.max_cone_cuts + 2000;
      if (budget_used >= cap) return st;
      for (const LinearConstraint& c : cuts) {
        if (budget_used >= cap) break;
        add_cut(c);
        ++budget_used;
      }
      if (Clock::now() > deadline_) return LpStatus::iteration_limit;
    }
  }

  Outcome process(const Node& node) {
    apply(node);
    std::size_t budget = 0;
    std::vector<double> last_lazy;
    for (;;) {
      bool cone_ok = true;
      const LpStatus st = solve_with_cuts(cone_ok, budget, false);
      if (st == LpStatus::infeasible) return {Outcome::pruned};
      if (st == LpStatus::iteration_limit && Clock::now() > deadline_) return {Outcome::time};
      if (st == LpStatus::unbounded) throw std::runtime_error("solve_mip: LP relaxation is unbounded");
      if (st != LpStatus::optimal) {
        if (p_.verbosity >= 2) std::cerr << "node " << nodes_ << ": LP " << to_string(st) << ", bound kept open\n";
        return {Outcome::trouble};
      }
      const double value = lp_->objective() + obj_const_;
      record_pseudo_cost(node, value);
      if (value >= prune_level()) {
        pruned_bound_ = std::min(pruned_bound_, value);
        return {Outcome::pruned, value};
      }
      const std::vector<double> x = lp_->primal();
      double bval = 0.0;
      const std::int64_t col = pick_branch(x, bval);
      if (col >= 0) return {Outcome::branch, value, col, bval};
      if (!cone_ok) return {Outcome::trouble, value};
      // Integral and cone-feasible: lazy constraints decide acceptance.
      // A lazy cut that leaves the LP point where it was is violated by less
      // than the LP can resolve; the point is then taken as it is.
      const bool stalled = !last_lazy.empty() && same_point(x, last_lazy);
      bool added = false;
      if (!stalled)
        for (const CutGenerator& gen : lazy_) {
          for (const LinearConstraint& c : gen(std::span<const double>(x.data(), n_model_))) {
            add_cut(c);
            added = true;
          }
        }
      if (added) {
        last_lazy = x;
        continue;
      }
      if (polish(x)) return {Outcome::integral, value};
      // Rounding within the integrality tolerance broke feasibility (tiny
      // right-hand sides do this); branch on the residual fractionality.
      const std::int64_t tiny = pick_branch(x, bval, 1e-12);
      if (tiny >= 0) return {Outcome::branch, value, tiny, bval};
      return {Outcome::trouble, value};
    }
  }

  // Re-solves with the binaries fixed at their rounded values so the
  // incumbent is exactly integral, then restores the node's bounds lazily.
  bool polish(const std::vector<double>& x) {
    for (std::size_t j = 0; j < n_total_; ++j) {
      if (!is_int_[j]) continue;
      const double r = std::round(x[j]);
      touch(static_cast<std::uint32_t>(j));
      lp_->set_bounds(j, r, r);
    }
    std::vector<double> last;
    for (int round = 0; round < 50; ++round) {
      bool cone_ok = true;
      std::size_t budget = 0;
      const LpStatus st = solve_with_cuts(cone_ok, budget, true);
      if (st != LpStatus::optimal || !cone_ok) return false;
      const std::vector<double> y = lp_->primal();
      const std::span<const double> ym(y.data(), n_model_);
      bool added = false;
      if (last.empty() || !same_point(y, last))
        for (const CutGenerator& gen : lazy_)
          for (const LinearConstraint& c : gen(ym)) {
            add_cut(c);
            added = true;
          }
      if (added) {
        last = y;
        continue;
      }
      const double value = lp_->objective() + obj_const_;
      if (value < ub_ - 1e-12 || !has_incumbent()) {
        ub_ = value;
        best_.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_model_));
        for (std::size_t j = 0; j < n_model_; ++j)
          if (is_int_[j]) best_[j] = std::round(best_[j]);
        if (p_.verbosity >= 1) std::cerr << "incumbent " << ub_ << " at node " << nodes_ << '\n';
      }
      return true;
    }
    return false;
  }

  void record_pseudo_cost(const Node& node, double value) {
    if (node.branch_col < 0 || node.parent_frac <= 0.0 || !std::isfinite(node.bound)) return;
    const int side = node.branch_dir > 0 ? 1 : 0;
    const auto j = static_cast<std::size_t>(node.branch_col);
    pc_sum_[side][j] += std::max(0.0, value - node.bound) / node.parent_frac;
    ++pc_cnt_[side][j];
  }
};

}  // namespace solver_detail

inline SolveResult solve_mip(const Model& m, const SolverParams& p = {}, const std::vector<CutGenerator>& lazy = {}) {
  solver_detail::BranchAndBound bb(m, p, lazy);
  return bb.run();
}

}  // namespace drcc
