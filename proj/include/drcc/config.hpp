#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <toml.hpp>

#include "drcc/harness.hpp"

namespace drcc {

// Malformed or unknown configuration; key is the dotted path at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Where the PV profile comes from: a CSV file or the synthetic bell.
struct ProfileSpec {
  std::string path;
  std::size_t periods = 53;
  std::string start = "08:20";
  int step_minutes = 10;
  double peak_kw = 58.0;
  std::string peak_time = "12:40";
  double width_minutes = 110.0;
  std::size_t panels = 1;
};

// Continuous RC parameters, when the fleet is given that way.
struct RcSpec {
  double R = 0.0, C = 0.0, Q_hvac = 0.0, T_out = 0.0, Q_out = 0.0;
};

struct RunConfig {
  DayConfig day;
  ModelKind kind = ModelKind::drcc_w2;
  std::size_t units = 100;
  BuildingParams unit;
  std::optional<RcSpec> rc;
  ProfileSpec profile;
  std::string out_dir;  // empty: DRCC_OUT_DIR or "out"
};

namespace config_detail {

inline int parse_clock(const std::string& key, const std::string& hhmm) {
  int h = 0, m = 0;
  char tail = 0;
  if (std::sscanf(hhmm.c_str(), "%d:%d%c", &h, &m, &tail) != 2 || h < 0 || h > 23 || m < 0 || m > 59)
    throw ConfigError(key, "expected a clock time HH:MM, got '" + hhmm + "'");
  return 60 * h + m;
}

inline std::string clock(int minute) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

// Reads one table, remembering which keys were consumed so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const toml::table* t, std::string name) : t_(t), name_(std::move(name)) {}

  std::string key(const std::string& k) const { return name_ + "." + k; }

  const toml::node* find(const std::string& k) {
    seen_.insert(k);
    return t_ ? t_->get(k) : nullptr;
  }

  void number(const std::string& k, double& out) {
    if (const toml::node* n = find(k)) {
      if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer()))
        out = *v;
      else
        throw ConfigError(key(k), "expected a number");
    }
  }

  void count(const std::string& k, std::size_t& out) {
    if (const toml::node* n = find(k)) {
      auto v = n->value<std::int64_t>();
      if (!n->is_integer() || !v || *v < 0) throw ConfigError(key(k), "expected a non-negative integer");
      out = static_cast<std::size_t>(*v);
    }
  }

  void integer(const std::string& k, int& out) {
    if (const toml::node* n = find(k)) {
      auto v = n->value<std::int64_t>();
      if (!n->is_integer() || !v) throw ConfigError(key(k), "expected an integer");
      out = static_cast<int>(*v);
    }
  }

  void flag(const std::string& k, bool& out) {
    if (const toml::node* n = find(k)) {
      if (!n->is_boolean()) throw ConfigError(key(k), "expected true or false");
      out = *n->value<bool>();
    }
  }

  void text(const std::string& k, std::string& out) {
    if (const toml::node* n = find(k)) {
      if (!n->is_string()) throw ConfigError(key(k), "expected a string");
      out = *n->value<std::string>();
    }
  }

  bool numbers(const std::string& k, std::vector<double>& out) {
    const toml::node* n = find(k);
    if (!n) return false;
    const toml::array* a = n->as_array();
    if (!a) throw ConfigError(key(k), "expected an array of numbers");
    out.clear();
    for (const toml::node& e : *a) {
      auto v = e.value<double>();
      if (!v || !(e.is_floating_point() || e.is_integer())) throw ConfigError(key(k), "expected an array of numbers");
      out.push_back(*v);
    }
    return true;
  }

  bool counts(const std::string& k, std::vector<std::size_t>& out) {
    const toml::node* n = find(k);
    if (!n) return false;
    const toml::array* a = n->as_array();
    if (!a) throw ConfigError(key(k), "expected an array of integers");
    out.clear();
    for (const toml::node& e : *a) {
      auto v = e.value<std::int64_t>();
      if (!e.is_integer() || !v || *v < 0) throw ConfigError(key(k), "expected an array of non-negative integers");
      out.push_back(static_cast<std::size_t>(*v));
    }
    return true;
  }

  bool has(const std::string& k) const { return t_ && t_->contains(k); }

  void reject_unknown() const {
    if (!t_) return;
    for (auto&& [k, v] : *t_) {
      const std::string name(k.str());
      if (!seen_.count(name)) throw ConfigError(key(name), "unknown key");
    }
  }

 private:
  const toml::table* t_;
  std::string name_;
  std::set<std::string> seen_;
};

template <typename E>
E pick(const std::string& key, const std::string& value, const std::map<std::string, E>& options) {
  auto it = options.find(value);
  if (it != options.end()) return it->second;
  std::string list;
  for (const auto& [name, e] : options) list += (list.empty() ? "" : ", ") + name;
  throw ConfigError(key, "unknown value '" + value + "' (expected one of: " + list + ")");
}

// Period numbers in files and on the command line start at 1.
inline std::vector<std::size_t> to_indices(const std::string& key, const std::vector<std::size_t>& ones) {
  std::vector<std::size_t> out;
  for (std::size_t p : ones) {
    if (p == 0) throw ConfigError(key, "period numbers start at 1");
    out.push_back(p - 1);
  }
  return out;
}

inline const toml::table* table_of(const toml::table& root, const std::string& name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(name, "expected a [" + name + "] section");
  return n->as_table();
}

}  // namespace config_detail

// Rebuilds the derived parts of the day configuration (fleet, profile)
// from the spec fields.
inline void materialize(RunConfig& rc) {
  using namespace config_detail;
  BuildingParams unit = rc.unit;
  if (rc.rc) unit = discretize_rc({rc.rc->R, rc.rc->C, rc.rc->Q_hvac, rc.rc->T_out, rc.rc->Q_out},
                                  rc.day.fleet.dt_seconds, rc.unit.P);
  if (rc.units == 0) throw ConfigError("fleet.units", "must be at least 1");
  rc.day.fleet.buildings.assign(rc.units, unit);
  const ProfileSpec& p = rc.profile;
  if (!p.path.empty()) {
    try {
      rc.day.profile = read_profile_csv(p.path);
    } catch (const std::exception& e) {
      throw ConfigError("profile.path", e.what());
    }
  } else {
    if (p.periods == 0) throw ConfigError("profile.periods", "must be at least 1");
    if (p.step_minutes <= 0) throw ConfigError("profile.step_minutes", "must be positive");
    rc.day.profile = synthetic_bell_profile(p.periods, parse_clock("profile.start", p.start), p.step_minutes, p.peak_kw,
                                            parse_clock("profile.peak_time", p.peak_time), p.width_minutes, p.panels);
  }
  try {
    rc.day.fleet.validate();
    rc.day.ambiguity.validate();
    rc.day.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("", e.what());
  }
}

inline RunConfig parse_config(const toml::table& root) {
  using namespace config_detail;
  static const std::set<std::string> sections{"fleet",  "profile", "scenarios", "ambiguity", "model",
                                              "solver", "output",  "sweep",     "bench"};
  for (auto&& [k, v] : root) {
    const std::string name(k.str());
    if (!sections.count(name)) throw ConfigError(name, "unknown section or key");
  }
  RunConfig rc;
  DayConfig& d = rc.day;

  Section fleet(table_of(root, "fleet"), "fleet");
  fleet.count("units", rc.units);
  const bool discrete = fleet.has("A") || fleet.has("B") || fleet.has("G") || fleet.has("v");
  const bool continuous = fleet.has("R") || fleet.has("C") || fleet.has("Q_hvac");
  if (discrete && continuous) throw ConfigError("fleet", "give either A/B/G/v or R/C/Q_hvac, not both");
  fleet.number("A", rc.unit.A);
  fleet.number("B", rc.unit.B);
  fleet.numbers("G", rc.unit.G);
  fleet.numbers("v", rc.unit.v);
  fleet.number("P", rc.unit.P);
  if (continuous) {
    RcSpec s;
    fleet.number("R", s.R);
    fleet.number("C", s.C);
    fleet.number("Q_hvac", s.Q_hvac);
    fleet.number("T_out", s.T_out);
    fleet.number("Q_out", s.Q_out);
    rc.rc = s;
  } else if (fleet.has("T_out") || fleet.has("Q_out")) {
    throw ConfigError("fleet", "T_out and Q_out belong to the R/C/Q_hvac form");
  }
  fleet.number("x_ref", d.fleet.x_ref);
  fleet.number("x_min", d.fleet.x_min);
  fleet.number("x_max", d.fleet.x_max);
  fleet.number("c_sys", d.fleet.c_sys);
  fleet.number("c_switch", d.fleet.c_switch);
  fleet.number("c_pv", d.fleet.c_pv);
  double dt_minutes = d.fleet.dt_seconds / 60.0;
  fleet.number("dt_minutes", dt_minutes);
  if (!(dt_minutes > 0.0)) throw ConfigError("fleet.dt_minutes", "must be positive");
  d.fleet.dt_seconds = 60.0 * dt_minutes;
  fleet.numbers("x0", d.x0);
  fleet.number("x0_lo", d.x0_lo);
  fleet.number("x0_hi", d.x0_hi);
  fleet.reject_unknown();

  Section prof(table_of(root, "profile"), "profile");
  prof.text("path", rc.profile.path);
  prof.count("periods", rc.profile.periods);
  prof.text("start", rc.profile.start);
  prof.integer("step_minutes", rc.profile.step_minutes);
  prof.number("peak_kw", rc.profile.peak_kw);
  prof.text("peak_time", rc.profile.peak_time);
  prof.number("width_minutes", rc.profile.width_minutes);
  prof.count("panels", rc.profile.panels);
  prof.reject_unknown();

  Section scen(table_of(root, "scenarios"), "scenarios");
  scen.count("n", d.n_scenarios);
  scen.number("frac", d.frac);
  scen.count("moment_samples", d.moment_samples);
  scen.count("n_oos", d.n_oos);
  scen.count("oos_sets", d.oos_sets);
  std::size_t seed = d.seed;
  scen.count("seed", seed);
  d.seed = seed;
  std::string sigma = d.sigma == SigmaMode::root ? "root" : "literal";
  scen.text("sigma", sigma);
  d.sigma = pick<SigmaMode>("scenarios.sigma", sigma, {{"root", SigmaMode::root}, {"literal", SigmaMode::literal}});
  scen.reject_unknown();

  Section amb(table_of(root, "ambiguity"), "ambiguity");
  amb.number("alpha", d.ambiguity.alpha);
  amb.number("delta", d.ambiguity.delta);
  amb.number("gamma1", d.ambiguity.gamma1);
  amb.number("gamma2", d.ambiguity.gamma2);
  amb.number("ct", d.ambiguity.ct);
  amb.reject_unknown();

  Section model(table_of(root, "model"), "model");
  std::string kind = to_string(rc.kind);
  model.text("kind", kind);
  try {
    rc.kind = parse_kind(kind);
  } catch (const std::exception& e) {
    throw ConfigError("model.kind", e.what());
  }
  if (rc.kind == ModelKind::fleet_size) throw ConfigError("model.kind", "fleet-size is not a per-period model");
  model.flag("strengthen", d.build.strengthen);
  model.flag("hull_rows", d.build.hull_rows);
  model.flag("count_hint", d.build.count_hint);
  model.number("moment_alpha_floor", d.build.moment_alpha_floor);
  std::string mm = to_string(d.moment_mode);
  model.text("moment_mode", mm);
  d.moment_mode =
      pick<AdjustableMode>("model.moment_mode", mm, {{"exact", AdjustableMode::exact}, {"bnc", AdjustableMode::bnc}});
  std::string wm = to_string(d.wasserstein_mode);
  model.text("adj_w_method", wm);
  d.wasserstein_mode = pick<WassersteinMode>("model.adj_w_method", wm,
                                             {{"formulation", WassersteinMode::formulation},
                                              {"pieces", WassersteinMode::pieces}});
  std::string combine = d.literal_combine ? "max" : "min";
  model.text("combine", combine);
  d.literal_combine = pick<bool>("model.combine", combine, {{"min", false}, {"max", true}});
  std::vector<std::size_t> periods;
  if (model.counts("periods", periods)) d.periods = to_indices("model.periods", periods);
  model.reject_unknown();

  Section sol(table_of(root, "solver"), "solver");
  sol.number("time_limit", d.solver.time_limit);
  sol.number("rel_gap", d.solver.rel_gap);
  sol.number("abs_gap", d.solver.abs_gap);
  sol.number("int_tol", d.solver.int_tol);
  sol.count("node_limit", d.solver.node_limit);
  sol.count("max_cone_cuts", d.solver.max_cone_cuts);
  sol.integer("verbosity", d.solver.verbosity);
  std::string br = d.solver.branching == Branching::most_fractional ? "most-fractional" : "pseudo-cost";
  sol.text("branching", br);
  d.solver.branching = pick<Branching>(
      "solver.branching", br,
      {{"most-fractional", Branching::most_fractional}, {"pseudo-cost", Branching::pseudo_cost}});
  if (!(d.solver.time_limit > 0.0)) throw ConfigError("solver.time_limit", "must be positive");
  sol.reject_unknown();

  Section out(table_of(root, "output"), "output");
  out.text("dir", rc.out_dir);
  out.reject_unknown();

  Section sw(table_of(root, "sweep"), "sweep");
  sw.numbers("ct", d.ct_grid);
  if (sw.counts("periods", periods)) d.sweep_periods = to_indices("sweep.periods", periods);
  sw.count("scenarios", d.sweep_scenarios);
  sw.reject_unknown();

  Section bench(table_of(root, "bench"), "bench");
  bench.count("instances", d.bench_instances);
  bench.reject_unknown();

  materialize(rc);
  return rc;
}

inline RunConfig parse_config_text(const std::string& text, const std::string& source = "config") {
  try {
    return parse_config(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream why;
    why << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(source, why.str());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

inline RunConfig default_config() {
  RunConfig rc;
  materialize(rc);
  return rc;
}

// Complete, explicit TOML for a configuration; parsing it back gives the
// same run.
inline std::string config_to_toml(const RunConfig& rc) {
  const DayConfig& d = rc.day;
  auto arr = [](const auto& v, std::size_t shift = 0) {
    toml::array a;
    for (auto x : v) {
      if constexpr (std::is_floating_point_v<decltype(x)>)
        a.push_back(x);
      else
        a.push_back(static_cast<std::int64_t>(x + shift));
    }
    return a;
  };
  toml::table fleet{{"units", static_cast<std::int64_t>(rc.units)}, {"P", rc.unit.P}};
  if (rc.rc) {
    fleet.insert("R", rc.rc->R);
    fleet.insert("C", rc.rc->C);
    fleet.insert("Q_hvac", rc.rc->Q_hvac);
    fleet.insert("T_out", rc.rc->T_out);
    fleet.insert("Q_out", rc.rc->Q_out);
  } else {
    fleet.insert("A", rc.unit.A);
    fleet.insert("B", rc.unit.B);
    fleet.insert("G", arr(rc.unit.G));
    fleet.insert("v", arr(rc.unit.v));
  }
  fleet.insert("x_ref", d.fleet.x_ref);
  fleet.insert("x_min", d.fleet.x_min);
  fleet.insert("x_max", d.fleet.x_max);
  fleet.insert("c_sys", d.fleet.c_sys);
  fleet.insert("c_switch", d.fleet.c_switch);
  fleet.insert("c_pv", d.fleet.c_pv);
  fleet.insert("dt_minutes", d.fleet.dt_seconds / 60.0);
  if (!d.x0.empty()) fleet.insert("x0", arr(d.x0));
  fleet.insert("x0_lo", d.x0_lo);
  fleet.insert("x0_hi", d.x0_hi);

  toml::table profile;
  if (!rc.profile.path.empty()) {
    profile.insert("path", rc.profile.path);
  } else {
    profile.insert("periods", static_cast<std::int64_t>(rc.profile.periods));
    profile.insert("start", rc.profile.start);
    profile.insert("step_minutes", rc.profile.step_minutes);
    profile.insert("peak_kw", rc.profile.peak_kw);
    profile.insert("peak_time", rc.profile.peak_time);
    profile.insert("width_minutes", rc.profile.width_minutes);
    profile.insert("panels", static_cast<std::int64_t>(rc.profile.panels));
  }

  toml::table scen{{"n", static_cast<std::int64_t>(d.n_scenarios)},
                   {"frac", d.frac},
                   {"moment_samples", static_cast<std::int64_t>(d.moment_samples)},
                   {"n_oos", static_cast<std::int64_t>(d.n_oos)},
                   {"oos_sets", static_cast<std::int64_t>(d.oos_sets)},
                   {"seed", static_cast<std::int64_t>(d.seed)},
                   {"sigma", d.sigma == SigmaMode::root ? "root" : "literal"}};
  toml::table amb{{"alpha", d.ambiguity.alpha},
                  {"delta", d.ambiguity.delta},
                  {"gamma1", d.ambiguity.gamma1},
                  {"gamma2", d.ambiguity.gamma2},
                  {"ct", d.ambiguity.ct}};
  toml::table model{{"kind", to_string(rc.kind)},
                    {"strengthen", d.build.strengthen},
                    {"hull_rows", d.build.hull_rows},
                    {"count_hint", d.build.count_hint},
                    {"moment_alpha_floor", d.build.moment_alpha_floor},
                    {"moment_mode", to_string(d.moment_mode)},
                    {"adj_w_method", to_string(d.wasserstein_mode)},
                    {"combine", d.literal_combine ? "max" : "min"}};
  if (!d.periods.empty()) model.insert("periods", arr(d.periods, 1));
  toml::table sol{{"time_limit", d.solver.time_limit},
                  {"rel_gap", d.solver.rel_gap},
                  {"abs_gap", d.solver.abs_gap},
                  {"int_tol", d.solver.int_tol},
                  {"node_limit", static_cast<std::int64_t>(d.solver.node_limit)},
                  {"max_cone_cuts", static_cast<std::int64_t>(d.solver.max_cone_cuts)},
                  {"verbosity", d.solver.verbosity},
                  {"branching", d.solver.branching == Branching::most_fractional ? "most-fractional" : "pseudo-cost"}};
  toml::table sweep{{"ct", arr(d.ct_grid)}, {"scenarios", static_cast<std::int64_t>(d.sweep_scenarios)}};
  if (!d.sweep_periods.empty()) sweep.insert("periods", arr(d.sweep_periods, 1));
  toml::table root{{"fleet", fleet},   {"profile", profile}, {"scenarios", scen},
                   {"ambiguity", amb}, {"model", model},     {"solver", sol},
                   {"sweep", sweep},   {"bench", toml::table{{"instances", static_cast<std::int64_t>(d.bench_instances)}}}};
  if (!rc.out_dir.empty()) root.insert("output", toml::table{{"dir", rc.out_dir}});
  std::ostringstream os;
  os << root;
  return os.str();
}

}  // namespace drcc
