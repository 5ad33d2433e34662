#pragma once

// LP-style text export of a Model, plus the matching reader used for
// round-trip checks. Cones and integrality hints travel in comment lines.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "drcc/model_ir.hpp"

namespace drcc {

namespace lp_detail {

inline std::string num(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string signed_num(double v) {
  std::string s = num(v);
  return (s[0] == '-') ? s : "+" + s;
}

inline void write_terms(std::ostream& os, const std::vector<Term>& terms, const Model& m) {
  if (terms.empty()) os << " 0";
  for (const Term& t : terms) os << ' ' << signed_num(t.coef) << ' ' << m.var(t.var).name;
}

// Comment-line expressions: "coef*name" tokens plus an optional bare constant.
inline void write_affine(std::ostream& os, const LinearExpr& e, const Model& m) {
  for (const Term& t : e.terms) os << ' ' << num(t.coef) << '*' << m.var(t.var).name;
  if (e.constant != 0.0 || e.terms.empty()) os << ' ' << num(e.constant);
}

inline double parse_num(const std::string& tok) {
  if (tok == "inf" || tok == "+inf") return kInf;
  if (tok == "-inf") return -kInf;
  std::size_t used = 0;
  double v = std::stod(tok, &used);
  if (used != tok.size()) throw ModelError("LP reader: bad number '" + tok + "'");
  return v;
}

struct Reader {
  Model model;
  std::unordered_map<std::string, VarRef> ids;

  VarRef lookup(const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    VarRef v = model.add_continuous(name, 0.0, kInf);
    ids.emplace(name, v);
    return v;
  }

  LinearExpr parse_affine(std::istringstream& in, const std::string& stop) {
    LinearExpr e;
    std::string tok;
    while (in >> tok && tok != stop) {
      const auto star = tok.find('*');
      if (star == std::string::npos)
        e.constant += parse_num(tok);
      else
        e.add(lookup(tok.substr(star + 1)), parse_num(tok.substr(0, star)));
    }
    return e;
  }

  std::vector<Term> parse_terms(std::istringstream& in, std::string& tail) {
    std::vector<Term> terms;
    std::string tok;
    while (in >> tok) {
      if (tok == "<=" || tok == ">=" || tok == "=") {
        tail = tok;
        return terms;
      }
      if (tok == "0") continue;
      std::string var;
      in >> var;
      terms.push_back({lookup(var), parse_num(tok)});
    }
    tail.clear();
    return terms;
  }
};

}  // namespace lp_detail

inline void write_lp(const Model& m, std::ostream& os) {
  using namespace lp_detail;
  os << "\\ model: " << (m.name.empty() ? "unnamed" : m.name) << '\n';
  os << "\\ period: " << m.period << '\n';
  const LinearExpr obj = m.objective();
  if (obj.constant != 0.0) os << "\\ objective_constant: " << num(obj.constant) << '\n';
  // Declaration order is fixed by the Bounds section; this line keeps ids
  // stable even for variables that appear first inside a cone comment.
  os << "\\ variables:";
  for (const Variable& v : m.variables()) os << ' ' << v.name;
  os << '\n';
  for (const SocConstraint& c : m.cones()) {
    os << "\\ cone " << c.name << ": [";
    for (std::size_t k = 0; k < c.vec.size(); ++k) {
      if (k) os << " ;";
      write_affine(os, c.vec[k], m);
    }
    os << " ] <=";
    write_affine(os, c.bound, m);
    os << '\n';
  }
  for (const IntegralExpr& h : m.integrals()) {
    os << "\\ integral " << h.name << ':';
    for (const Term& t : h.terms) os << ' ' << num(t.coef) << '*' << m.var(t.var).name;
    os << '\n';
  }
  os << "Minimize\n obj:";
  write_terms(os, obj.terms, m);
  os << "\nSubject To\n";
  for (const LinearConstraint& r : m.rows()) {
    os << ' ' << r.name << ':';
    write_terms(os, r.terms, m);
    os << (r.sense == Sense::le ? " <= " : r.sense == Sense::ge ? " >= " : " = ") << num(r.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const Variable& v : m.variables()) os << ' ' << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << '\n';
  os << "Binaries\n";
  for (const Variable& v : m.variables())
    if (v.kind == VarKind::binary) os << ' ' << v.name << '\n';
  os << "End\n";
}

inline std::string to_lp_string(const Model& m) {
  std::ostringstream os;
  write_lp(m, os);
  return os.str();
}

inline Model read_lp(std::istream& is) {
  using namespace lp_detail;
  Reader rd;
  enum class Section { header, objective, rows, bounds, binaries, done } sec = Section::header;
  std::vector<std::pair<VarRef, std::pair<double, double>>> bounds;
  std::vector<VarRef> binaries;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    if (line[0] == '\\') {
      std::string tag;
      in >> tag >> tag;
      if (tag == "model:") {
        in >> rd.model.name;
      } else if (tag == "period:") {
        in >> rd.model.period;
      } else if (tag == "objective_constant:") {
        std::string v;
        in >> v;
        rd.model.set_objective_constant(parse_num(v));
      } else if (tag == "variables:") {
        std::string v;
        while (in >> v) rd.lookup(v);
      } else if (tag == "cone") {
        std::string name, bracket;
        in >> name >> bracket;
        name.pop_back();
        std::vector<LinearExpr> vec;
        for (;;) {
          LinearExpr e;
          std::string tok;
          bool closed = false;
          while (in >> tok) {
            if (tok == ";") break;
            if (tok == "]") {
              closed = true;
              break;
            }
            const auto star = tok.find('*');
            if (star == std::string::npos)
              e.constant += parse_num(tok);
            else
              e.add(rd.lookup(tok.substr(star + 1)), parse_num(tok.substr(0, star)));
          }
          vec.push_back(std::move(e));
          if (closed) break;
        }
        std::string le;
        in >> le;
        LinearExpr bound = rd.parse_affine(in, "");
        rd.model.add_cone(std::move(vec), std::move(bound), name);
      } else if (tag == "integral") {
        std::string name;
        in >> name;
        name.pop_back();
        LinearExpr e = rd.parse_affine(in, "");
        rd.model.add_integral(std::move(e.terms), name);
      }
      continue;
    }
    if (line == "Minimize") {
      sec = Section::objective;
      continue;
    }
    if (line == "Subject To") {
      sec = Section::rows;
      continue;
    }
    if (line == "Bounds") {
      sec = Section::bounds;
      continue;
    }
    if (line == "Binaries") {
      sec = Section::binaries;
      continue;
    }
    if (line == "End") {
      sec = Section::done;
      continue;
    }
    switch (sec) {
      case Section::objective: {
        std::string label, tail;
        in >> label;
        for (const Term& t : rd.parse_terms(in, tail)) rd.model.add_objective(t.var, t.coef);
        break;
      }
      case Section::rows: {
        std::string label, tail, rhs;
        in >> label;
        label.pop_back();
        std::vector<Term> terms = rd.parse_terms(in, tail);
        in >> rhs;
        const Sense s = tail == "<=" ? Sense::le : tail == ">=" ? Sense::ge : Sense::eq;
        rd.model.add_row(LinearConstraint{label, std::move(terms), s, parse_num(rhs)});
        break;
      }
      case Section::bounds: {
        std::string lo, op1, name, op2, hi;
        in >> lo >> op1 >> name >> op2 >> hi;
        bounds.push_back({rd.lookup(name), {parse_num(lo), parse_num(hi)}});
        break;
      }
      case Section::binaries: {
        std::string name;
        while (in >> name) binaries.push_back(rd.lookup(name));
        break;
      }
      default:
        throw ModelError("LP reader: unexpected line '" + line + "'");
    }
  }
  // Rebuild with kinds and bounds applied, preserving declaration order.
  Model out;
  out.name = rd.model.name;
  out.period = rd.model.period;
  std::vector<VarKind> kind(rd.model.num_vars(), VarKind::continuous);
  for (VarRef b : binaries) kind[b.id] = VarKind::binary;
  std::vector<std::pair<double, double>> bnd(rd.model.num_vars(), {0.0, kInf});
  for (const auto& [v, lh] : bounds) bnd[v.id] = lh;
  for (std::size_t i = 0; i < rd.model.num_vars(); ++i)
    out.add_var(rd.model.var(VarRef{i}).name, kind[i], bnd[i].first, bnd[i].second);
  for (const LinearConstraint& r : rd.model.rows()) out.add_row(r);
  for (const SocConstraint& c : rd.model.cones()) out.add_cone(c.vec, c.bound, c.name);
  for (const IntegralExpr& h : rd.model.integrals()) out.add_integral(h.terms, h.name);
  out.add_objective(rd.model.objective());
  return out;
}

inline Model read_lp_string(const std::string& text) {
  std::istringstream is(text);
  return read_lp(is);
}

}  // namespace drcc
