#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace drcc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Coefficients below this magnitude are dropped when a row is canonicalized.
inline constexpr double kCoefEps = 1e-12;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VarKind { continuous, binary };

struct VarRef {
  std::size_t id = 0;
  friend bool operator==(VarRef, VarRef) = default;
  friend bool operator<(VarRef a, VarRef b) { return a.id < b.id; }
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Term {
  VarRef var;
  double coef = 0.0;
};

// Merges repeated variables (keeping first-appearance order) and drops
// negligible coefficients.
inline void canonicalize_terms(std::vector<Term>& terms) {
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const Term& t : terms) {
    auto [it, fresh] = slot.try_emplace(t.var.id, out.size());
    if (fresh)
      out.push_back(t);
    else
      out[it->second].coef += t.coef;
  }
  std::erase_if(out, [](const Term& t) { return std::abs(t.coef) < kCoefEps; });
  terms = std::move(out);
}

class LinearExpr {
 public:
  std::vector<Term> terms;
  double constant = 0.0;

  LinearExpr() = default;
  LinearExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)
  LinearExpr(VarRef v, double c = 1.0) : terms{{v, c}} {}  // NOLINT

  LinearExpr& add(VarRef v, double c) {
    terms.push_back({v, c});
    return *this;
  }
  LinearExpr& add(const LinearExpr& e, double scale = 1.0) {
    for (const Term& t : e.terms) terms.push_back({t.var, t.coef * scale});
    constant += e.constant * scale;
    return *this;
  }

  double evaluate(std::span<const double> x) const {
    double v = constant;
    for (const Term& t : terms) v += t.coef * x[t.var.id];
    return v;
  }

  LinearExpr& operator+=(const LinearExpr& e) { return add(e, 1.0); }
  LinearExpr& operator-=(const LinearExpr& e) { return add(e, -1.0); }
  LinearExpr& operator*=(double s) {
    for (Term& t : terms) t.coef *= s;
    constant *= s;
    return *this;
  }
  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(double s, LinearExpr a) { return a *= s; }
  friend LinearExpr operator*(LinearExpr a, double s) { return a *= s; }
  friend LinearExpr operator*(double s, VarRef v) { return LinearExpr(v, s); }
};

enum class Sense { le, eq, ge };

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;

  double activity(std::span<const double> x) const {
    double a = 0.0;
    for (const Term& t : terms) a += t.coef * x[t.var.id];
    return a;
  }
  // Positive when the point violates the row.
  double violation(std::span<const double> x) const {
    const double a = activity(x);
    switch (sense) {
      case Sense::le: return a - rhs;
      case Sense::ge: return rhs - a;
      case Sense::eq: return std::abs(a - rhs);
    }
    return 0.0;
  }
};

// ||vec|| <= bound
struct SocConstraint {
  std::string name;
  std::vector<LinearExpr> vec;
  LinearExpr bound;

  double norm_at(std::span<const double> x) const {
    double s = 0.0;
    for (const LinearExpr& e : vec) {
      const double v = e.evaluate(x);
      s += v * v;
    }
    return std::sqrt(s);
  }
  double violation(std::span<const double> x) const { return norm_at(x) - bound.evaluate(x); }
};

// Expression known to take integer values at every integer-feasible point.
// The branch-and-bound engine may branch on it as a general disjunction.
struct IntegralExpr {
  std::string name;
  std::vector<Term> terms;
};

class Model {
 public:
  std::string name;
  int period = -1;

  VarRef add_continuous(std::string var_name, double lower, double upper) {
    return add_var(std::move(var_name), VarKind::continuous, lower, upper);
  }
  VarRef add_binary(std::string var_name) { return add_var(std::move(var_name), VarKind::binary, 0.0, 1.0); }

  VarRef add_var(std::string var_name, VarKind kind, double lower, double upper) {
    if (kind == VarKind::binary && (lower < 0.0 || upper > 1.0))
      throw ModelError("binary variable " + var_name + " has bounds outside [0,1]");
    if (lower > upper) throw ModelError("variable " + var_name + " has lower > upper");
    vars_.push_back({std::move(var_name), kind, lower, upper});
    return VarRef{vars_.size() - 1};
  }

  const Variable& var(VarRef v) const { return vars_.at(v.id); }
  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t num_vars() const { return vars_.size(); }

  void set_bounds(VarRef v, double lower, double upper) {
    Variable& var = vars_.at(v.id);
    if (lower > upper) throw ModelError("variable " + var.name + " bounds crossed");
    var.lower = lower;
    var.upper = upper;
  }
  void fix(VarRef v, double value) { set_bounds(v, value, value); }

  std::optional<VarRef> find_var(const std::string& var_name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == var_name) return VarRef{i};
    return std::nullopt;
  }

  // The expression's constant moves to the right-hand side.
  std::size_t add_row(LinearExpr expr, Sense sense, double rhs, std::string row_name) {
    LinearConstraint c{std::move(row_name), std::move(expr.terms), sense, rhs - expr.constant};
    return add_row(std::move(c));
  }
  std::size_t add_row(LinearConstraint c) {
    canonicalize_terms(c.terms);
    rows_.push_back(std::move(c));
    return rows_.size() - 1;
  }
  const std::vector<LinearConstraint>& rows() const { return rows_; }

  std::size_t add_cone(std::vector<LinearExpr> vec, LinearExpr bound, std::string cone_name) {
    if (vec.empty()) throw ModelError("cone " + cone_name + " has an empty norm argument");
    for (LinearExpr& e : vec) canonicalize_terms(e.terms);
    canonicalize_terms(bound.terms);
    cones_.push_back({std::move(cone_name), std::move(vec), std::move(bound)});
    return cones_.size() - 1;
  }
  const std::vector<SocConstraint>& cones() const { return cones_; }

  void add_integral(std::vector<Term> terms, std::string hint_name) {
    canonicalize_terms(terms);
    integrals_.push_back({std::move(hint_name), std::move(terms)});
  }
  const std::vector<IntegralExpr>& integrals() const { return integrals_; }

  void add_objective(VarRef v, double c) { objective_.terms.push_back({v, c}); }
  void add_objective(const LinearExpr& e) { objective_.add(e); }
  // Canonical copy of the (minimized) objective.
  LinearExpr objective() const {
    LinearExpr o = objective_;
    canonicalize_terms(o.terms);
    return o;
  }
  void set_objective_constant(double c) { objective_.constant = c; }

  std::size_t num_binaries() const {
    return static_cast<std::size_t>(
        std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.kind == VarKind::binary; }));
  }
  std::size_t num_continuous() const { return vars_.size() - num_binaries(); }

  // Number of rows whose name starts with the prefix.
  std::size_t count_rows(const std::string& prefix) const {
    return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [&](const LinearConstraint& r) {
      return r.name.compare(0, prefix.size(), prefix) == 0;
    }));
  }
  std::size_t count_vars(const std::string& prefix) const {
    return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(), [&](const Variable& v) {
      return v.name.compare(0, prefix.size(), prefix) == 0;
    }));
  }

  void validate() const {
    auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
      for (const Term& t : terms) {
        if (t.var.id >= vars_.size()) throw ModelError(where + " references an undeclared variable");
        if (!std::isfinite(t.coef)) throw ModelError(where + " has a non-finite coefficient");
      }
    };
    for (const Variable& v : vars_) {
      if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
        throw ModelError("variable " + v.name + " has invalid bounds");
      if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
        throw ModelError("binary variable " + v.name + " has bounds outside [0,1]");
    }
    for (const LinearConstraint& r : rows_) {
      check_terms(r.terms, "row " + r.name);
      if (!std::isfinite(r.rhs)) throw ModelError("row " + r.name + " has a non-finite right-hand side");
    }
    for (const SocConstraint& c : cones_) {
      for (const LinearExpr& e : c.vec) check_terms(e.terms, "cone " + c.name);
      check_terms(c.bound.terms, "cone " + c.name);
    }
    for (const IntegralExpr& h : integrals_) check_terms(h.terms, "integral hint " + h.name);
    check_terms(objective_.terms, "objective");
  }

 private:
  std::vector<Variable> vars_;
  std::vector<LinearConstraint> rows_;
  std::vector<SocConstraint> cones_;
  std::vector<IntegralExpr> integrals_;
  LinearExpr objective_;
};

// w = x*y for binary x and y in [0, y_upper]; the four envelope rows are exact
// at integer x. y_upper defaults to y's declared upper bound.
inline VarRef mccormick_product(Model& m, VarRef x, VarRef y, std::optional<double> y_upper = std::nullopt,
                                const std::string& w_name = "") {
  const Variable& xv = m.var(x);
  const Variable& yv = m.var(y);
  if (xv.kind != VarKind::binary) throw ModelError("mccormick_product: " + xv.name + " is not binary");
  const double yu = y_upper.value_or(yv.upper);
  if (!std::isfinite(yu)) throw ModelError("mccormick_product: variable " + yv.name + " has no finite upper bound");
  if (yu < 0.0 || yv.lower < 0.0 || yv.upper > yu)
    throw ModelError("mccormick_product: bounds of " + yv.name + " are not inside [0, yU]");
  const std::string name = w_name.empty() ? "w_" + xv.name + "_" + yv.name : w_name;
  VarRef w = m.add_continuous(name, 0.0, yu);
  m.add_row(LinearExpr(w), Sense::ge, 0.0, "mc0_" + name);
  // w >= y - (1 - x) yU
  m.add_row(LinearExpr(w).add(y, -1.0).add(x, -yu), Sense::ge, -yu, "mc1_" + name);
  m.add_row(LinearExpr(w).add(x, -yu), Sense::le, 0.0, "mc2_" + name);
  m.add_row(LinearExpr(w).add(y, -1.0), Sense::le, 0.0, "mc3_" + name);
  return w;
}

// Supporting hyperplane of ||v|| <= s along the direction of v(point). The
// cut reads dir . v(z) <= s(z) and is valid for the whole cone. Returns
// nothing when the point already satisfies the cone within tol, unless forced.
inline std::optional<LinearConstraint> soc_linearization_cut(const SocConstraint& c, std::span<const double> point,
                                                             double tol = 1e-9, bool force = false) {
  std::vector<double> v(c.vec.size());
  double norm = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = c.vec[k].evaluate(point);
    norm += v[k] * v[k];
  }
  norm = std::sqrt(norm);
  if (!force && norm <= c.bound.evaluate(point) + tol) return std::nullopt;

  std::vector<double> dir(v.size(), 0.0);
  if (norm > 0.0)
    for (std::size_t k = 0; k < v.size(); ++k) dir[k] = v[k] / norm;
  else
    dir[0] = 1.0;

  LinearExpr lhs;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (dir[k] != 0.0) lhs.add(c.vec[k], dir[k]);
  lhs.add(c.bound, -1.0);
  LinearConstraint cut{"oa_" + c.name, std::move(lhs.terms), Sense::le, -lhs.constant};
  canonicalize_terms(cut.terms);
  return cut;
}

}  // namespace drcc
