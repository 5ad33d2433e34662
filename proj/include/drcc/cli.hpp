#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drcc/config.hpp"
#include "drcc/harness.hpp"
#include "drcc/lp_format.hpp"
#include "drcc/verify.hpp"

namespace drcc {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2 };

// ---- result.json ----

inline nlohmann::json run_to_json(const DayRun& run, const RunConfig& cfg) {
  using nlohmann::json;
  json periods = json::array();
  for (const PeriodRecord& p : run.periods) {
    json r;
    r["period"] = p.period + 1;
    r["time"] = p.label;
    r["status"] = to_string(p.status);
    r["objective"] = std::isfinite(p.objective) ? json(p.objective) : json(nullptr);
    r["bound"] = std::isfinite(p.bound) ? json(p.bound) : json(nullptr);
    r["gap"] = std::isfinite(p.gap) ? json(p.gap) : json(nullptr);
    r["wall_s"] = p.wall_seconds;
    r["nodes"] = p.nodes;
    r["alpha"] = p.alpha ? json(*p.alpha) : json(nullptr);
    r["branch"] = p.branch;
    r["fleet_kw"] = p.load;
    r["mean_pv_kw"] = p.mean_pv;
    r["fallback"] = p.fallback;
    r["note"] = p.note;
    r["u"] = p.u;
    r["x_prev"] = p.x_prev;
    r["x"] = p.x;
    periods.push_back(std::move(r));
  }
  json out;
  out["kind"] = to_string(run.kind);
  out["seed"] = run.seed;
  out["config"] = config_to_toml(cfg);
  out["summary"] = {{"periods", run.periods.size()},
                    {"optimal", run.solved()},
                    {"fallbacks", run.fallbacks()},
                    {"total_wall_s", run.total_wall()}};
  out["periods"] = std::move(periods);
  return out;
}

inline DayRun run_from_json(const nlohmann::json& j) {
  auto num = [](const nlohmann::json& v, double missing) { return v.is_null() ? missing : v.get<double>(); };
  DayRun run;
  run.kind = parse_kind(j.at("kind").get<std::string>());
  run.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& r : j.at("periods")) {
    PeriodRecord p;
    const auto period = r.at("period").get<std::size_t>();
    if (period == 0) throw std::invalid_argument("result: period numbers start at 1");
    p.period = period - 1;
    p.label = r.at("time").get<std::string>();
    const std::string st = r.at("status").get<std::string>();
    for (SolveStatus s : {SolveStatus::optimal, SolveStatus::feasible_gap, SolveStatus::infeasible, SolveStatus::time_limit})
      if (st == to_string(s)) p.status = s;
    p.objective = num(r.at("objective"), kInf);
    p.bound = num(r.at("bound"), -kInf);
    p.gap = num(r.at("gap"), kInf);
    p.wall_seconds = r.at("wall_s").get<double>();
    p.nodes = r.at("nodes").get<std::size_t>();
    if (!r.at("alpha").is_null()) p.alpha = r.at("alpha").get<double>();
    p.branch = r.at("branch").get<std::string>();
    p.load = r.at("fleet_kw").get<double>();
    p.mean_pv = r.at("mean_pv_kw").get<double>();
    p.fallback = r.at("fallback").get<bool>();
    p.note = r.at("note").get<std::string>();
    p.u = r.at("u").get<std::vector<int>>();
    p.x_prev = r.at("x_prev").get<std::vector<double>>();
    p.x = r.at("x").get<std::vector<double>>();
    run.periods.push_back(std::move(p));
  }
  return run;
}

namespace cli_detail {

struct Options {
  std::string config;
  std::optional<std::string> kind;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit, alpha, delta, gamma1, gamma2, ct;
  std::optional<bool> strengthen;
  bool literal = false;
  std::optional<std::string> adj_w_method, moment_mode;
  std::string out;
  std::string result;
  std::size_t period = 1;
  double unit_cost = 1.0;
  int verbosity = -1;
};

inline void add_run_options(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "TOML configuration file");
  sub->add_option("--kind", o.kind,
                  "det | cc | drcc-m | drcc-w1 | drcc-w2 | adj-m | adj-w-bigm | adj-w-free | fleet-size");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--time-limit", o.time_limit, "per-period solver limit in seconds");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--alpha", o.alpha, "risk level");
  sub->add_option("--delta", o.delta, "Wasserstein radius");
  sub->add_option("--gamma1", o.gamma1, "moment ambiguity: mean tolerance");
  sub->add_option("--gamma2", o.gamma2, "moment ambiguity: covariance tolerance");
  sub->add_option("--ct", o.ct, "risk cost for the adjustable kinds");
  sub->add_flag("--strengthen{true},--no-strengthen{false}", o.strengthen, "SAA/Wasserstein strengthening");
  sub->add_flag("--literal", o.literal,
                "moment sigma as 1'S1 and the higher-value combine rule for the adjustable moment model");
  sub->add_option("--adj-w-method", o.adj_w_method, "adjustable Wasserstein: pieces | formulation");
  sub->add_option("--moment-mode", o.moment_mode, "adjustable moment: bnc | exact");
  sub->add_option("-v,--verbosity", o.verbosity, "solver log level");
}

// Config file (or defaults) with the command-line overrides applied.
inline RunConfig resolve(const Options& o, const std::optional<std::string>& snapshot = std::nullopt) {
  RunConfig rc;
  if (!o.config.empty())
    rc = load_config(o.config);
  else if (snapshot)
    rc = parse_config_text(*snapshot, "result snapshot");
  else
    rc = default_config();
  DayConfig& d = rc.day;
  if (o.kind) {
    try {
      rc.kind = parse_kind(*o.kind);
    } catch (const std::exception& e) {
      throw ConfigError("--kind", e.what());
    }
  }
  if (o.seed) d.seed = *o.seed;
  if (o.time_limit) d.solver.time_limit = *o.time_limit;
  if (o.alpha) d.ambiguity.alpha = *o.alpha;
  if (o.delta) d.ambiguity.delta = *o.delta;
  if (o.gamma1) d.ambiguity.gamma1 = *o.gamma1;
  if (o.gamma2) d.ambiguity.gamma2 = *o.gamma2;
  if (o.ct) d.ambiguity.ct = *o.ct;
  if (o.strengthen) d.build.strengthen = *o.strengthen;
  if (o.literal) {
    d.sigma = SigmaMode::literal;
    d.literal_combine = true;
  }
  if (o.adj_w_method)
    d.wasserstein_mode = config_detail::pick<WassersteinMode>(
        "--adj-w-method", *o.adj_w_method,
        {{"formulation", WassersteinMode::formulation}, {"pieces", WassersteinMode::pieces}});
  if (o.moment_mode)
    d.moment_mode = config_detail::pick<AdjustableMode>("--moment-mode", *o.moment_mode,
                                                        {{"exact", AdjustableMode::exact}, {"bnc", AdjustableMode::bnc}});
  if (o.verbosity >= 0) d.solver.verbosity = o.verbosity;
  if (!o.out.empty()) rc.out_dir = o.out;
  if (!(d.solver.time_limit > 0.0)) throw ConfigError("--time-limit", "must be positive");
  try {
    d.fleet.validate();
    d.ambiguity.validate();
    d.validate();
  } catch (const std::exception& e) {
    throw ConfigError("", e.what());
  }
  return rc;
}

inline std::filesystem::path output_dir(const RunConfig& rc) {
  std::string dir = rc.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("DRCC_OUT_DIR");
    dir = env && *env ? env : "out";
  }
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  w(out);
  std::cout << "wrote " << path.string() << '\n';
}

inline nlohmann::json read_result(const std::string& path) {
  if (path.empty()) throw ConfigError("--result", "a result.json path is required");
  std::ifstream in(path);
  if (!in) throw ConfigError("--result", "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("--result", e.what());
  }
}

inline void require_per_period(ModelKind k) {
  if (k == ModelKind::fleet_size) throw ConfigError("--kind", "fleet-size is only available through export-model");
}

inline void print_run_summary(const DayRun& run) {
  std::size_t gap_hits = 0;
  for (const PeriodRecord& p : run.periods) gap_hits += p.status == SolveStatus::time_limit;
  std::printf("%s: %zu periods, %zu optimal, %zu at the time limit, %zu held previous schedule, %.2f s\n",
              to_string(run.kind), run.periods.size(), run.solved(), gap_hits, run.fallbacks(), run.total_wall());
}

inline void write_run_outputs(const DayRun& run, const RunConfig& rc, const std::filesystem::path& dir) {
  write_file(dir / "schedule.csv", [&](std::ostream& o) { write_schedule_csv(run, o); });
  write_file(dir / "temps.csv", [&](std::ostream& o) { write_temps_csv(run, o); });
  write_file(dir / "loads.csv", [&](std::ostream& o) { write_loads_csv(run, o); });
  write_file(dir / "result.json", [&](std::ostream& o) { o << run_to_json(run, rc).dump(1) << '\n'; });
}

inline int report_evaluation(const EvalReport& r, const DayRun& run) {
  std::size_t above = 0;
  for (double p : r.p95) above += p >= 0.8;
  std::printf("out-of-sample: 95th percentile >= 0.8 in %zu of %zu periods; comfort violations %zu\n", above,
              r.p95.size(), r.comfort_violations);
  return (r.comfort_violations || run.fallbacks()) ? exit_failure : exit_ok;
}

inline int cmd_solve(const Options& o, bool evaluate) {
  const RunConfig rc = resolve(o);
  require_per_period(rc.kind);
  const auto dir = output_dir(rc);
  const DayRun run = run_sequential(rc.day, rc.kind, &std::cerr);
  write_run_outputs(run, rc, dir);
  print_run_summary(run);
  if (!evaluate) return run.fallbacks() ? exit_failure : exit_ok;
  const EvalReport r = evaluate_out_of_sample(run, rc.day);
  write_file(dir / "oos.csv", [&](std::ostream& out) { write_oos_csv(r, out); });
  return report_evaluation(r, run);
}

inline int cmd_evaluate(const Options& o) {
  const nlohmann::json j = read_result(o.result);
  const RunConfig rc = resolve(o, j.at("config").get<std::string>());
  const DayRun run = run_from_json(j);
  const EvalReport r = evaluate_out_of_sample(run, rc.day);
  write_file(output_dir(rc) / "oos.csv", [&](std::ostream& out) { write_oos_csv(r, out); });
  return report_evaluation(r, run);
}

inline int cmd_verify(const Options& o) {
  const nlohmann::json j = read_result(o.result);
  const RunConfig rc = resolve(o, j.at("config").get<std::string>());
  const DayRun run = run_from_json(j);
  std::size_t bad = 0;
  for (const OracleVerdict& v : verify_run(rc.day, run)) {
    if (v.feasible) continue;
    ++bad;
    std::printf("FAIL %s\n", v.detail.c_str());
  }
  std::printf("verify: %zu of %zu periods pass\n", run.periods.size() - bad, run.periods.size());
  return bad ? exit_failure : exit_ok;
}

inline int cmd_sweep(const Options& o) {
  const RunConfig rc = resolve(o);
  if (!is_adjustable(rc.kind)) throw ConfigError("--kind", "sweep needs adj-m, adj-w-bigm or adj-w-free");
  const auto rows = sweep_risk_cost(rc.day, rc.kind);
  write_file(output_dir(rc) / "sweep.csv", [&](std::ostream& out) { write_sweep_csv(rows, out); });
  const std::size_t bad = sweep_monotonicity_violations(rows);
  std::printf("sweep %s: %zu rows, monotonicity violations %zu\n", to_string(rc.kind), rows.size(), bad);
  return bad ? exit_failure : exit_ok;
}

inline int cmd_bench(const Options& o) {
  const RunConfig rc = resolve(o);
  require_per_period(rc.kind);
  const auto runs = bench_runs(rc.day, rc.kind, &std::cerr);
  const auto rows = bench_report(runs);
  write_file(output_dir(rc) / "bench.csv", [&](std::ostream& out) { write_bench_csv(rows, out); });
  for (const BenchRow& b : rows)
    std::printf("instance %zu: %.3f s, %zu limit hits\n", b.instance, b.total_seconds, b.limit_hits);
  return exit_ok;
}

inline int cmd_export(const Options& o) {
  const RunConfig rc = resolve(o);
  const DayConfig& d = rc.day;
  if (o.period == 0 || o.period > d.profile.periods()) throw ConfigError("--period", "outside the profile");
  const std::size_t t = o.period - 1;
  const std::vector<double> x0 = d.initial_state();
  Model model;
  std::optional<std::string> reason;
  if (rc.kind == ModelKind::fleet_size) {
    std::vector<PeriodInstance> periods;
    for (std::size_t p : d.day_periods()) periods.push_back(period_instance(d, p, x0));
    FleetSizeFormulation f = build_fleet_size(periods, d.fleet.size(), o.unit_cost, period_options(d, t));
    model = std::move(f.model);
    reason = f.infeasible_reason;
  } else {
    BuildOptions opt = period_options(d, t);
    if (rc.kind == ModelKind::adj_m && d.moment_mode == AdjustableMode::exact)
      opt.moment_branch = BuildOptions::MomentBranch::exact_high;
    Formulation f = build_formulation(rc.kind, period_instance(d, t, x0), opt);
    model = std::move(f.model);
    reason = f.infeasible_reason;
  }
  if (reason) std::fprintf(stderr, "note: %s\n", reason->c_str());
  const std::string name = std::string("model_") + to_string(rc.kind) + "_p" + std::to_string(o.period) + ".lp";
  write_file(output_dir(rc) / name, [&](std::ostream& out) { write_lp(model, out); });
  return exit_ok;
}

}  // namespace cli_detail

inline int dispatch(int argc, const char* const* argv) {
  using namespace cli_detail;
  CLI::App app{"Demand-response scheduling of HVAC fleets under PV uncertainty"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {{"simulate", "run the day and evaluate it out of sample"},
                      {"solve", "run the day sequentially"},
                      {"evaluate", "out-of-sample evaluation of a stored result"},
                      {"sweep", "risk-cost sweep for an adjustable kind"},
                      {"bench", "repeated day runs with independent in-sample sets"},
                      {"verify", "oracle re-check of a stored result"},
                      {"export-model", "write one period's model as LP text"}};
  std::map<std::string, CLI::App*> subs;
  for (const Cmd& c : cmds) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    add_run_options(s, o);
    subs[c.name] = s;
  }
  for (const char* n : {"evaluate", "verify"}) subs[n]->add_option("--result", o.result, "result.json from solve");
  subs["export-model"]->add_option("--period", o.period, "period number, starting at 1");
  subs["export-model"]->add_option("--unit-cost", o.unit_cost, "fleet-size: cost per enrolled unit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  try {
    if (subs["simulate"]->parsed()) return cmd_solve(o, true);
    if (subs["solve"]->parsed()) return cmd_solve(o, false);
    if (subs["evaluate"]->parsed()) return cmd_evaluate(o);
    if (subs["verify"]->parsed()) return cmd_verify(o);
    if (subs["sweep"]->parsed()) return cmd_sweep(o);
    if (subs["bench"]->parsed()) return cmd_bench(o);
    if (subs["export-model"]->parsed()) return cmd_export(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_failure;
  }
  return exit_config;
}

}  // namespace drcc
