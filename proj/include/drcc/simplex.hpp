#pragma once

// Dense-tableau bounded-variable simplex. Every row i gets a logical column
// r_i = a_i.x carrying the row's range, so the system is [A -I] z = 0 with
// bounds on every column. Primal (two-phase) and dual iterations share the
// same tableau; bound changes and appended rows keep the basis, which is what
// branch-and-bound reoptimization relies on.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace drcc {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    case LpStatus::numerical: return "numerical";
  }
  return "?";
}

struct SparseRow {
  std::vector<std::size_t> idx;
  std::vector<double> val;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Tolerance for the final check of row activities against the original rows.
  double check_tol = 1e-8;
  std::size_t max_iterations = 0;  // 0 = automatic
};

class SimplexEngine {
 public:
  using Clock = std::chrono::steady_clock;

  SimplexEngine(std::vector<double> cost, std::vector<double> lower, std::vector<double> upper,
                const std::vector<SparseRow>& rows, SimplexOptions opt = {})
      : opt_(opt), n_(cost.size()) {
    lo_ = std::move(lower);
    hi_ = std::move(upper);
    cost_ = std::move(cost);
    for (const SparseRow& r : rows) append_row_data(r);
    m_ = rows_.size();
    stride_ = n_ + m_ + 16;
    init_slack_basis();
  }

  std::size_t num_structural() const { return n_; }
  std::size_t num_rows() const { return m_; }
  std::size_t iterations() const { return total_iterations_; }
  void set_deadline(std::optional<Clock::time_point> d) { deadline_ = d; }

  double lower(std::size_t j) const { return lo_[j]; }
  double upper(std::size_t j) const { return hi_[j]; }

  void set_bounds(std::size_t j, double lo, double hi) {
    lo_[j] = lo;
    hi_[j] = hi;
    if (state_[j] == State::basic) return;
    const double old = x_[j];
    place_nonbasic(j);
    shift_nonbasic(j, x_[j] - old);
  }

  // Appends a row (e.g. a cut) whose logical column becomes basic; the basis
  // stays dual feasible so the next solve can use dual iterations.
  std::size_t add_row(const SparseRow& r) {
    append_row_data(r);
    const std::size_t i = m_;
    const std::size_t col = n_ + m_;
    if (col + 1 > stride_) relayout(col + 1 + std::max<std::size_t>(64, col / 4));
    ++m_;
    T_.resize(m_ * stride_, 0.0);
    double* R = row_ptr(i);
    const SparseRow& s = rows_.back();
    for (std::size_t k = 0; k < s.idx.size(); ++k) R[s.idx[k]] = s.val[k];
    R[col] = -1.0;
    for (std::size_t k = 0; k < i; ++k) {
      const double f = R[head_[k]];
      if (f == 0.0) continue;
      const double* P = row_ptr(k);
      for (std::size_t j = 0; j < col; ++j)
        if (P[j] != 0.0) R[j] -= f * P[j];
      R[head_[k]] = 0.0;
    }
    for (std::size_t j = 0; j <= col; ++j) R[j] = -R[j];
    R[col] = 1.0;
    head_.push_back(col);
    pos_.push_back(static_cast<std::ptrdiff_t>(i));
    state_.push_back(State::basic);
    d_.push_back(0.0);
    double act = 0.0;
    for (std::size_t k = 0; k < s.idx.size(); ++k) act += s.val[k] * x_[s.idx[k]];
    x_.push_back(act);
    return i;
  }

  LpStatus solve() {
    iterations_ = 0;
    const std::size_t limit =
        opt_.max_iterations ? opt_.max_iterations : 50 * (n_ + m_) + 20000;
    max_iter_ = limit;
    for (int attempt = 0; attempt < 4; ++attempt) {
      LpStatus s = LpStatus::optimal;
      bool need_primal = true;
      if (dual_feasible()) {
        s = run_dual();
        if (s == LpStatus::iteration_limit) return s;
        if (s == LpStatus::optimal) need_primal = false;
      }
      if (need_primal) {
        s = run_primal(true);
        if (s == LpStatus::infeasible) {
          // Confirm on a tableau rebuilt from the stored rows, then from the
          // slack basis, before trusting it.
          if (!refactor()) reset_to_slack_basis();
          s = run_primal(true);
          if (s == LpStatus::infeasible) {
            reset_to_slack_basis();
            s = run_primal(true);
          }
          if (s == LpStatus::infeasible) return s;
        }
        if (s != LpStatus::optimal) return s;
      }
      s = run_primal(false);
      if (s != LpStatus::optimal) return s;
      switch (check_solution()) {
        case Check::ok: return LpStatus::optimal;
        case Check::reiterate: break;
        case Check::refactor:
          if (!refactor()) reset_to_slack_basis();
          break;
      }
    }
    return LpStatus::numerical;
  }

  double objective() const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += cost_[j] * x_[j];
    return s;
  }
  double value(std::size_t j) const { return x_[j]; }
  std::vector<double> primal() const { return {x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_)}; }
  // Row duals in the caller's (unscaled) units: d objective / d row activity bound.
  std::vector<double> duals() const {
    std::vector<double> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = (state_[n_ + i] == State::basic ? 0.0 : d_[n_ + i]) * scale_[i];
    return y;
  }
  // Reduced costs of structural columns.
  std::vector<double> reduced_costs() const { return {d_.begin(), d_.begin() + static_cast<std::ptrdiff_t>(n_)}; }

 private:
  enum class State : std::uint8_t { basic, lower, upper, zero };
  enum class Check { ok, reiterate, refactor };

  SimplexOptions opt_;
  std::size_t n_ = 0, m_ = 0, stride_ = 0;
  std::vector<SparseRow> rows_;  // scaled copies of the rows
  std::vector<double> scale_;
  std::vector<double> lo_, hi_, cost_, x_, d_;
  std::vector<State> state_;
  std::vector<std::size_t> head_;
  std::vector<std::ptrdiff_t> pos_;
  std::vector<double> T_;
  std::vector<std::size_t> nz_;
  std::size_t iterations_ = 0, total_iterations_ = 0, max_iter_ = 0;
  std::optional<Clock::time_point> deadline_;

  double* row_ptr(std::size_t i) { return T_.data() + i * stride_; }
  const double* row_ptr(std::size_t i) const { return T_.data() + i * stride_; }
  std::size_t ncols() const { return n_ + m_; }

  void append_row_data(const SparseRow& r) {
    double mx = 0.0;
    for (double v : r.val) mx = std::max(mx, std::abs(v));
    const double s = mx > 0.0 ? 1.0 / mx : 1.0;
    SparseRow c;
    for (std::size_t k = 0; k < r.idx.size(); ++k) {
      if (r.val[k] == 0.0) continue;
      c.idx.push_back(r.idx[k]);
      c.val.push_back(r.val[k] * s);
    }
    c.lo = r.lo * s;
    c.hi = r.hi * s;
    rows_.push_back(std::move(c));
    scale_.push_back(s);
    lo_.push_back(rows_.back().lo);
    hi_.push_back(rows_.back().hi);
    cost_.push_back(0.0);
  }

  void relayout(std::size_t new_stride) {
    std::vector<double> T(m_ * new_stride, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      std::copy(row_ptr(i), row_ptr(i) + ncols(), T.data() + i * new_stride);
    T_.swap(T);
    stride_ = new_stride;
  }

  void place_nonbasic(std::size_t j) {
    const bool lf = std::isfinite(lo_[j]), hf = std::isfinite(hi_[j]);
    if (lf && hf) {
      const bool up = d_.size() > j && d_[j] < 0.0;
      state_[j] = up ? State::upper : State::lower;
      x_[j] = up ? hi_[j] : lo_[j];
    } else if (lf) {
      state_[j] = State::lower;
      x_[j] = lo_[j];
    } else if (hf) {
      state_[j] = State::upper;
      x_[j] = hi_[j];
    } else {
      state_[j] = State::zero;
      x_[j] = 0.0;
    }
  }

  // A nonbasic column moved by delta; basic values follow.
  void shift_nonbasic(std::size_t j, double delta) {
    if (delta == 0.0) return;
    for (std::size_t i = 0; i < m_; ++i) {
      const double t = row_ptr(i)[j];
      if (t != 0.0) x_[head_[i]] -= t * delta;
    }
  }

  void init_slack_basis() {
    const std::size_t N = ncols();
    x_.assign(N, 0.0);
    d_.assign(N, 0.0);
    state_.assign(N, State::lower);
    pos_.assign(N, -1);
    head_.resize(m_);
    for (std::size_t j = 0; j < n_; ++j) d_[j] = cost_[j];
    for (std::size_t j = 0; j < n_; ++j) place_nonbasic(j);
    T_.assign(m_ * stride_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double* R = row_ptr(i);
      double act = 0.0;
      for (std::size_t k = 0; k < rows_[i].idx.size(); ++k) {
        R[rows_[i].idx[k]] = -rows_[i].val[k];
        act += rows_[i].val[k] * x_[rows_[i].idx[k]];
      }
      R[n_ + i] = 1.0;
      head_[i] = n_ + i;
      pos_[n_ + i] = static_cast<std::ptrdiff_t>(i);
      state_[n_ + i] = State::basic;
      x_[n_ + i] = act;
    }
  }

  void reset_to_slack_basis() {
    if (stride_ < ncols() + 1) stride_ = ncols() + 16;
    init_slack_basis();
  }

  bool out_of_time() const { return deadline_ && Clock::now() > *deadline_; }

  double infeasibility(std::size_t j) const {
    if (x_[j] < lo_[j] - opt_.feas_tol) return lo_[j] - x_[j];
    if (x_[j] > hi_[j] + opt_.feas_tol) return x_[j] - hi_[j];
    return 0.0;
  }

  bool dual_feasible() const {
    for (std::size_t j = 0; j < ncols(); ++j) {
      switch (state_[j]) {
        case State::basic: break;
        case State::lower:
          if (lo_[j] < hi_[j] && d_[j] < -opt_.opt_tol) return false;
          break;
        case State::upper:
          if (lo_[j] < hi_[j] && d_[j] > opt_.opt_tol) return false;
          break;
        case State::zero:
          if (std::abs(d_[j]) > opt_.opt_tol) return false;
          break;
      }
    }
    return true;
  }

  void pivot(std::size_t r, std::size_t q) {
    const std::size_t N = ncols();
    double* P = row_ptr(r);
    const double inv = 1.0 / P[q];
    nz_.clear();
    for (std::size_t j = 0; j < N; ++j) {
      if (P[j] == 0.0) continue;
      P[j] *= inv;
      if (std::abs(P[j]) < 1e-14) {
        P[j] = 0.0;
        continue;
      }
      nz_.push_back(j);
    }
    P[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* R = row_ptr(i);
      const double f = R[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) R[j] -= f * P[j];
      R[q] = 0.0;
    }
    const double f = d_[q];
    if (f != 0.0) {
      for (std::size_t j : nz_) d_[j] -= f * P[j];
      d_[q] = 0.0;
    }
    const std::size_t leaving = head_[r];
    pos_[leaving] = -1;
    head_[r] = q;
    pos_[q] = static_cast<std::ptrdiff_t>(r);
    state_[q] = State::basic;
    ++iterations_;
    ++total_iterations_;
  }

  void compute_basics() {
    std::vector<std::size_t> moved;
    for (std::size_t j = 0; j < ncols(); ++j)
      if (state_[j] != State::basic && x_[j] != 0.0) moved.push_back(j);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* R = row_ptr(i);
      double v = 0.0;
      for (std::size_t j : moved) v -= R[j] * x_[j];
      x_[head_[i]] = v;
    }
  }

  void compute_duals() {
    const std::size_t N = ncols();
    for (std::size_t j = 0; j < N; ++j) d_[j] = cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double c = cost_[head_[i]];
      if (c == 0.0) continue;
      const double* R = row_ptr(i);
      for (std::size_t j = 0; j < N; ++j)
        if (R[j] != 0.0) d_[j] -= c * R[j];
    }
    for (std::size_t i = 0; i < m_; ++i) d_[head_[i]] = 0.0;
  }

  // Rebuilds the tableau for the current basis from the stored rows
  // (Gauss-Jordan with partial pivoting). False when the basis is singular.
  bool refactor() {
    const std::size_t N = ncols();
    std::vector<double> T(m_ * stride_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double* R = T.data() + i * stride_;
      for (std::size_t k = 0; k < rows_[i].idx.size(); ++k) R[rows_[i].idx[k]] = rows_[i].val[k];
      R[n_ + i] = -1.0;
    }
    std::vector<std::size_t> cols = head_;
    std::sort(cols.begin(), cols.end());
    std::vector<char> used(m_, 0);
    std::vector<std::size_t> new_head(m_);
    for (std::size_t q : cols) {
      std::size_t best = m_;
      double big = 1e-11;
      for (std::size_t i = 0; i < m_; ++i) {
        if (used[i]) continue;
        const double a = std::abs(T[i * stride_ + q]);
        if (a > big) {
          big = a;
          best = i;
        }
      }
      if (best == m_) return false;
      used[best] = 1;
      new_head[best] = q;
      double* P = T.data() + best * stride_;
      const double inv = 1.0 / P[q];
      nz_.clear();
      for (std::size_t j = 0; j < N; ++j)
        if (P[j] != 0.0) {
          P[j] *= inv;
          nz_.push_back(j);
        }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == best) continue;
        double* R = T.data() + i * stride_;
        const double f = R[q];
        if (f == 0.0) continue;
        for (std::size_t j : nz_) R[j] -= f * P[j];
        R[q] = 0.0;
      }
    }
    T_.swap(T);
    head_ = new_head;
    for (std::size_t j = 0; j < N; ++j) pos_[j] = -1;
    for (std::size_t i = 0; i < m_; ++i) pos_[head_[i]] = static_cast<std::ptrdiff_t>(i);
    compute_basics();
    compute_duals();
    return true;
  }

  Check check_solution() {
    compute_basics();
    compute_duals();
    // Row activities recomputed from the stored rows must match the logical
    // columns; a mismatch means the tableau has drifted.
    for (std::size_t i = 0; i < m_; ++i) {
      double act = 0.0;
      for (std::size_t k = 0; k < rows_[i].idx.size(); ++k) act += rows_[i].val[k] * x_[rows_[i].idx[k]];
      if (std::abs(act - x_[n_ + i]) > opt_.check_tol * std::max(1.0, std::abs(act))) return Check::refactor;
    }
    for (std::size_t j = 0; j < ncols(); ++j)
      if (infeasibility(j) > 0.0) return Check::reiterate;
    if (!dual_feasible()) return Check::reiterate;
    return Check::ok;
  }

  // Entering candidate for a pricing vector; dir is +1 (increase) or -1.
  bool choose_entering(const std::vector<double>& dv, bool bland, std::size_t& q, int& dir) const {
    double best = 0.0;
    bool found = false;
    for (std::size_t j = 0; j < ncols(); ++j) {
      const State s = state_[j];
      if (s == State::basic || lo_[j] == hi_[j]) continue;
      const double dj = dv[j];
      int dj_dir = 0;
      if ((s == State::lower || s == State::zero) && dj < -opt_.opt_tol)
        dj_dir = 1;
      else if ((s == State::upper || s == State::zero) && dj > opt_.opt_tol)
        dj_dir = -1;
      if (!dj_dir) continue;
      if (bland) {
        q = j;
        dir = dj_dir;
        return true;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
        dir = dj_dir;
        found = true;
      }
    }
    return found;
  }

  bool step_limit() {
    if (iterations_ >= max_iter_) return true;
    return (iterations_ & 63) == 0 && out_of_time();
  }

  LpStatus run_primal(bool phase1) {
    std::vector<double> d1;
    std::size_t degenerate = 0;
    bool bland = false;
    for (;;) {
      if (step_limit()) return LpStatus::iteration_limit;
      const std::vector<double>* dv = &d_;
      if (phase1) {
        bool any = false;
        d1.assign(ncols(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
          const std::size_t b = head_[i];
          double sgn = 0.0;
          if (x_[b] < lo_[b] - opt_.feas_tol)
            sgn = 1.0;
          else if (x_[b] > hi_[b] + opt_.feas_tol)
            sgn = -1.0;
          if (sgn == 0.0) continue;
          any = true;
          const double* R = row_ptr(i);
          // Entries the ratio test would skip must not drive pricing either,
          // or the entering column finds no blocking row.
          for (std::size_t j = 0; j < ncols(); ++j)
            if (std::abs(R[j]) > opt_.pivot_tol) d1[j] += sgn * R[j];
        }
        if (!any) return LpStatus::optimal;
        for (std::size_t i = 0; i < m_; ++i) d1[head_[i]] = 0.0;
        dv = &d1;
      }
      std::size_t q = 0;
      int dir = 0;
      if (!choose_entering(*dv, bland, q, dir)) return phase1 ? LpStatus::infeasible : LpStatus::optimal;

      // Ratio test (Harris two-pass in phase 2).
      const double tol = opt_.feas_tol;
      double tmax = kHuge;
      double bound_tol_min = kHuge;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[q];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const std::size_t b = head_[i];
        const double rate = -a * dir;
        const double lim = limit_for(b, rate, phase1, tol);
        bound_tol_min = std::min(bound_tol_min, lim);
      }
      const double range = hi_[q] - lo_[q];
      std::ptrdiff_t leave = -1;
      double t = kHuge;
      if (bound_tol_min < kHuge) {
        double best_a = -1.0;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = row_ptr(i)[q];
          if (std::abs(a) <= opt_.pivot_tol) continue;
          const std::size_t b = head_[i];
          const double rate = -a * dir;
          const double lim = limit_for(b, rate, phase1, 0.0);
          if (lim > bound_tol_min) continue;
          const bool better = bland ? (leave < 0 || b < head_[static_cast<std::size_t>(leave)])
                                    : std::abs(a) > best_a;
          if (better) {
            best_a = std::abs(a);
            leave = static_cast<std::ptrdiff_t>(i);
            t = std::max(lim, 0.0);
          }
        }
      }
      tmax = t;
      if (std::isfinite(range) && range <= tmax) {
        // Bound flip of the entering column.
        shift_nonbasic_to(q, dir > 0 ? hi_[q] : lo_[q]);
        state_[q] = dir > 0 ? State::upper : State::lower;
        ++iterations_;
        ++total_iterations_;
        degenerate = 0;
        bland = false;
        continue;
      }
      if (leave < 0) {
        if (phase1) return LpStatus::numerical;
        return LpStatus::unbounded;
      }
      const std::size_t r = static_cast<std::size_t>(leave);
      const std::size_t p = head_[r];
      // Move along the edge.
      const double step = dir * tmax;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[q];
        if (a != 0.0) x_[head_[i]] -= a * step;
      }
      x_[q] += step;
      // The leaving column lands on the bound it was heading for.
      settle_leaving(p, -row_ptr(r)[q] * dir);
      pivot(r, q);
      if (tmax < 1e-12) {
        if (++degenerate > 100) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
  }

  static constexpr double kHuge = 1e300;

  // Step length allowed by basic column b moving at the given rate.
  double limit_for(std::size_t b, double rate, bool phase1, double tol) const {
    const double xb = x_[b];
    if (phase1) {
      if (xb < lo_[b] - opt_.feas_tol) return rate > 0.0 ? (lo_[b] - xb) / rate : kHuge;
      if (xb > hi_[b] + opt_.feas_tol) return rate < 0.0 ? (hi_[b] - xb) / rate : kHuge;
    }
    if (rate > 0.0) return std::isfinite(hi_[b]) ? std::max(0.0, (hi_[b] + tol - xb) / rate) : kHuge;
    return std::isfinite(lo_[b]) ? std::max(0.0, (lo_[b] - tol - xb) / rate) : kHuge;
  }

  void settle_leaving(std::size_t p, double rate) {
    if (rate > 0.0) {
      // Moving up: it stops at the lower bound if it started below it,
      // otherwise at the upper bound.
      if (std::isfinite(hi_[p]) && std::abs(x_[p] - hi_[p]) <= std::abs(x_[p] - lo_[p])) {
        x_[p] = hi_[p];
        state_[p] = State::upper;
      } else {
        x_[p] = lo_[p];
        state_[p] = State::lower;
      }
    } else {
      if (std::isfinite(lo_[p]) && std::abs(x_[p] - lo_[p]) <= std::abs(x_[p] - hi_[p])) {
        x_[p] = lo_[p];
        state_[p] = State::lower;
      } else {
        x_[p] = hi_[p];
        state_[p] = State::upper;
      }
    }
  }

  void shift_nonbasic_to(std::size_t j, double target) {
    const double delta = target - x_[j];
    x_[j] = target;
    shift_nonbasic(j, delta);
  }

  LpStatus run_dual() {
    std::size_t stall = 0;
    for (;;) {
      if (step_limit()) return LpStatus::iteration_limit;
      // Leaving row: largest primal infeasibility.
      std::ptrdiff_t leave = -1;
      double worst = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double v = infeasibility(head_[i]);
        if (v > worst) {
          worst = v;
          leave = static_cast<std::ptrdiff_t>(i);
        }
      }
      if (leave < 0) return LpStatus::optimal;
      const std::size_t r = static_cast<std::size_t>(leave);
      const std::size_t p = head_[r];
      const bool below = x_[p] < lo_[p];
      const double target = below ? lo_[p] : hi_[p];
      const double want = below ? 1.0 : -1.0;  // required sign of the change in x_p
      const double* R = row_ptr(r);

      double ratio_tol_min = kHuge;
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (!dual_eligible(j, R[j], want)) continue;
        ratio_tol_min = std::min(ratio_tol_min, (std::abs(d_[j]) + opt_.opt_tol) / std::abs(R[j]));
      }
      if (ratio_tol_min >= kHuge) return LpStatus::infeasible;
      std::ptrdiff_t enter = -1;
      double best_a = -1.0;
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (!dual_eligible(j, R[j], want)) continue;
        const double ratio = std::abs(d_[j]) / std::abs(R[j]);
        if (ratio > ratio_tol_min) continue;
        if (std::abs(R[j]) > best_a) {
          best_a = std::abs(R[j]);
          enter = static_cast<std::ptrdiff_t>(j);
        }
      }
      const std::size_t q = static_cast<std::size_t>(enter);
      const double delta_q = (target - x_[p]) / (-R[q]);
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[q];
        if (a != 0.0) x_[head_[i]] -= a * delta_q;
      }
      x_[q] += delta_q;
      x_[p] = target;
      state_[p] = below ? State::lower : State::upper;
      if (lo_[p] == hi_[p]) state_[p] = State::lower;
      pivot(r, q);
      // Keep reduced costs sign-consistent after round-off.
      for (std::size_t j = 0; j < ncols(); ++j) {
        if (state_[j] == State::lower && d_[j] < 0.0 && d_[j] > -opt_.opt_tol) d_[j] = 0.0;
        if (state_[j] == State::upper && d_[j] > 0.0 && d_[j] < opt_.opt_tol) d_[j] = 0.0;
      }
      if (std::abs(delta_q) < 1e-12) {
        if (++stall > 5000) return LpStatus::iteration_limit;
      } else {
        stall = 0;
      }
    }
  }

  bool dual_eligible(std::size_t j, double a, double want) const {
    if (state_[j] == State::basic || lo_[j] == hi_[j] || std::abs(a) <= opt_.pivot_tol) return false;
    // x_p changes by -a * dx_j; dx_j's allowed sign depends on the state.
    const double sign_dx = -want * (a > 0.0 ? 1.0 : -1.0);
    switch (state_[j]) {
      case State::lower: return sign_dx > 0.0;
      case State::upper: return sign_dx < 0.0;
      case State::zero: return true;
      default: return false;
    }
  }
};

}  // namespace drcc
