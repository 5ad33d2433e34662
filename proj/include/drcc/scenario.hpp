#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drcc/thermal.hpp"

namespace drcc {

// SplitMix64 finalizer; used to derive independent stream seeds from a
// master seed and a (tag, index) pair.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index = 0) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (tag + 1) + 0xBF58476D1CE4E5B9ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct PvProfile {
  std::vector<std::string> times;
  std::vector<std::vector<double>> mean_kw;  // [period][panel]

  std::size_t periods() const { return mean_kw.size(); }
  std::size_t panels() const { return mean_kw.empty() ? 0 : mean_kw.front().size(); }
  double total(std::size_t t) const { return std::accumulate(mean_kw[t].begin(), mean_kw[t].end(), 0.0); }
};

inline std::string clock_label(int minutes) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", (minutes / 60) % 24, minutes % 60);
  return buf;
}

// Gaussian bell between sunrise-ish start and the last period, split evenly
// over the panels.
inline PvProfile synthetic_bell_profile(std::size_t periods = 53, int start_minute = 8 * 60 + 20, int step_minutes = 10,
                                        double peak_kw = 100.0, double peak_minute = 12 * 60 + 40,
                                        double width_minutes = 110.0, std::size_t panels = 1) {
  if (panels == 0) throw std::invalid_argument("profile: need at least one panel");
  PvProfile p;
  for (std::size_t t = 0; t < periods; ++t) {
    const int minute = start_minute + static_cast<int>(t) * step_minutes;
    const double z = (minute - peak_minute) / width_minutes;
    const double total = peak_kw * std::exp(-0.5 * z * z);
    p.times.push_back(clock_label(minute));
    p.mean_kw.emplace_back(panels, total / static_cast<double>(panels));
  }
  return p;
}

// CSV with header period,panel,mean_kw; periods and panels are 1-based.
inline PvProfile read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("period,panel,mean_kw", 0) != 0)
    throw std::invalid_argument("profile CSV: expected header period,panel,mean_kw");
  PvProfile p;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      throw std::invalid_argument("profile CSV: malformed line '" + line + "'");
    const std::size_t t = std::stoul(a), k = std::stoul(b);
    const double kw = std::stod(c);
    if (t == 0 || k == 0) throw std::invalid_argument("profile CSV: period and panel are 1-based");
    if (kw < 0) throw std::invalid_argument("profile CSV: negative mean_kw");
    if (p.mean_kw.size() < t) p.mean_kw.resize(t);
    if (p.mean_kw[t - 1].size() < k) p.mean_kw[t - 1].resize(k, 0.0);
    p.mean_kw[t - 1][k - 1] = kw;
  }
  std::size_t panels = 0;
  for (const auto& row : p.mean_kw) panels = std::max(panels, row.size());
  for (auto& row : p.mean_kw) row.resize(panels, 0.0);
  for (std::size_t t = 0; t < p.mean_kw.size(); ++t) p.times.push_back(std::to_string(t + 1));
  return p;
}

inline PvProfile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("profile CSV: cannot open " + path);
  return read_profile_csv(in);
}

inline void write_profile_csv(const PvProfile& p, std::ostream& out) {
  out << "period,panel,mean_kw\n";
  for (std::size_t t = 0; t < p.periods(); ++t)
    for (std::size_t k = 0; k < p.panels(); ++k) out << t + 1 << ',' << k + 1 << ',' << p.mean_kw[t][k] << '\n';
}

struct ScenarioSet {
  std::size_t period = 0;
  std::vector<std::vector<double>> samples;  // [sample][panel]
  std::vector<double> probabilities;
  std::vector<double> totals;

  std::size_t size() const { return samples.size(); }
  void recompute_totals() {
    totals.resize(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n)
      totals[n] = std::accumulate(samples[n].begin(), samples[n].end(), 0.0);
  }
};

inline ScenarioSet make_scenario_set(std::size_t period, std::vector<std::vector<double>> samples) {
  if (samples.empty()) throw std::invalid_argument("scenario set: no samples");
  ScenarioSet s;
  s.period = period;
  s.samples = std::move(samples);
  s.probabilities.assign(s.samples.size(), 1.0 / static_cast<double>(s.samples.size()));
  s.recompute_totals();
  return s;
}

// Scalar-total scenarios (one panel); convenient for tests and oracles.
inline ScenarioSet scenario_set_from_totals(const std::vector<double>& totals, std::size_t period = 0) {
  std::vector<std::vector<double>> samples;
  for (double v : totals) samples.push_back({v});
  return make_scenario_set(period, std::move(samples));
}

inline ScenarioSet generate_period_scenarios(const std::vector<double>& mean, double frac, std::size_t n,
                                             std::uint64_t seed, std::size_t period) {
  if (n == 0) throw std::invalid_argument("generate_uniform_scenarios: N must be positive");
  if (!(frac >= 0.0 && frac < 1.0)) throw std::invalid_argument("generate_uniform_scenarios: frac must lie in [0,1)");
  std::mt19937_64 rng(derive_seed(seed, 0x5CE7A810ULL, period));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> samples(n, std::vector<double>(mean.size()));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t k = 0; k < mean.size(); ++k) samples[s][k] = mean[k] * (1.0 - frac + 2.0 * frac * unit(rng));
  return make_scenario_set(period, std::move(samples));
}

// One set per period, each drawn from its own stream so periods can be
// generated independently.
inline std::vector<ScenarioSet> generate_uniform_scenarios(const PvProfile& profile, double frac, std::size_t n,
                                                           std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_uniform_scenarios: N must be positive");
  std::vector<ScenarioSet> out;
  out.reserve(profile.periods());
  for (std::size_t t = 0; t < profile.periods(); ++t)
    out.push_back(generate_period_scenarios(profile.mean_kw[t], frac, n, seed, t));
  return out;
}

// Random subset without replacement (moment estimates use a handful of samples).
inline ScenarioSet pick_subset(const ScenarioSet& s, std::size_t count, std::uint64_t seed) {
  if (count == 0 || count > s.size()) throw std::invalid_argument("pick_subset: bad count");
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed(seed, 0x5B5E7ULL, s.period));
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<std::vector<double>> samples;
  for (std::size_t i = 0; i < count; ++i) samples.push_back(s.samples[idx[i]]);
  return make_scenario_set(s.period, std::move(samples));
}

inline void write_scenarios_csv(const std::vector<ScenarioSet>& sets, std::ostream& out) {
  out << "period,sample,panel,kw\n";
  char buf[40];
  for (const ScenarioSet& s : sets)
    for (std::size_t n = 0; n < s.size(); ++n)
      for (std::size_t k = 0; k < s.samples[n].size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", s.samples[n][k]);
        out << s.period + 1 << ',' << n + 1 << ',' << k + 1 << ',' << buf << '\n';
      }
}

inline std::vector<ScenarioSet> read_scenarios_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("period,sample,panel,kw", 0) != 0)
    throw std::invalid_argument("scenario CSV: expected header period,sample,panel,kw");
  std::vector<std::vector<std::vector<double>>> raw;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c, d;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') || !std::getline(ss, d, ','))
      throw std::invalid_argument("scenario CSV: malformed line '" + line + "'");
    const std::size_t t = std::stoul(a), n = std::stoul(b), k = std::stoul(c);
    if (t == 0 || n == 0 || k == 0) throw std::invalid_argument("scenario CSV: indices are 1-based");
    if (raw.size() < t) raw.resize(t);
    if (raw[t - 1].size() < n) raw[t - 1].resize(n);
    if (raw[t - 1][n - 1].size() < k) raw[t - 1][n - 1].resize(k, 0.0);
    raw[t - 1][n - 1][k - 1] = std::stod(d);
  }
  std::vector<ScenarioSet> sets;
  for (std::size_t t = 0; t < raw.size(); ++t) sets.push_back(make_scenario_set(t, std::move(raw[t])));
  return sets;
}

enum class SigmaMode { root, literal };

struct MomentSummary {
  std::vector<double> mu;
  std::vector<std::vector<double>> cov;
  double theta = 0.0;
  double sigma = 0.0;
};

inline MomentSummary empirical_moments(const ScenarioSet& s, SigmaMode mode = SigmaMode::root) {
  if (s.size() == 0) throw std::invalid_argument("empirical_moments: empty set");
  const std::size_t d = s.samples.front().size();
  const double inv = 1.0 / static_cast<double>(s.size());
  MomentSummary m;
  m.mu.assign(d, 0.0);
  for (const auto& x : s.samples)
    for (std::size_t i = 0; i < d; ++i) m.mu[i] += x[i] * inv;
  m.cov.assign(d, std::vector<double>(d, 0.0));
  for (const auto& x : s.samples)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m.cov[i][j] += (x[i] - m.mu[i]) * (x[j] - m.mu[j]) * inv;
  m.theta = std::accumulate(m.mu.begin(), m.mu.end(), 0.0);
  double quad = 0.0;
  for (const auto& row : m.cov)
    for (double c : row) quad += c;
  quad = std::max(quad, 0.0);
  m.sigma = mode == SigmaMode::root ? std::sqrt(quad) : quad;
  return m;
}

struct SortedScenarios {
  std::vector<std::size_t> order;  // 0-based sample indices, totals non-increasing
  std::vector<double> sorted;      // P^(1) >= ... >= P^(N)
  double p0 = 0.0;                 // maximum fleet load

  std::size_t size() const { return sorted.size(); }
  // P^(n) for n = 0..N, with P^(0) the fleet maximum.
  double at(std::size_t n) const { return n == 0 ? p0 : sorted.at(n - 1); }
};

inline SortedScenarios sort_totals(const ScenarioSet& s, double fleet_max_load) {
  SortedScenarios out;
  out.order.resize(s.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return s.totals[a] > s.totals[b]; });
  for (std::size_t i : out.order) out.sorted.push_back(s.totals[i]);
  out.p0 = fleet_max_load;
  return out;
}

inline SortedScenarios sort_totals(const ScenarioSet& s, const FleetModel& fleet) {
  return sort_totals(s, fleet.max_load());
}

inline bool check_assumption1(const SortedScenarios& s) { return !s.sorted.empty() && s.p0 > s.sorted.back(); }

enum class AmbiguityKind { moment, wasserstein };

struct AmbiguitySpec {
  AmbiguityKind kind = AmbiguityKind::wasserstein;
  double gamma1 = 0.0;
  double gamma2 = 1.0;
  double delta = 0.02;
  bool adjustable = false;
  double alpha = 0.2;
  double ct = 10.0;

  void validate() const {
    if (kind == AmbiguityKind::moment) {
      if (gamma1 < 0.0) throw std::invalid_argument("ambiguity: gamma1 must be >= 0");
      if (gamma2 < std::max(gamma1, 1.0)) throw std::invalid_argument("ambiguity: gamma2 must be >= max(gamma1, 1)");
    } else if (!(delta > 0.0)) {
      throw std::invalid_argument("ambiguity: Wasserstein radius must be positive");
    }
    if (adjustable) {
      if (!(ct > 0.0)) throw std::invalid_argument("ambiguity: risk cost must be positive");
    } else if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("ambiguity: alpha must lie in (0,1)");
    }
  }
};

// k = floor(alpha N), guarded against products like 0.3*10 landing just
// below an integer.
inline std::size_t risk_index(double alpha, std::size_t n) {
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
}

}  // namespace drcc
