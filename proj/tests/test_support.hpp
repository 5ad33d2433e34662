#pragma once

#include <random>
#include <vector>

#include "drcc/formulations.hpp"

namespace drcc::testing_support {

struct RandomSpec {
  std::size_t units = 4;
  std::size_t scenarios = 10;
  double alpha = 0.2;
  double delta = 0.02;
  AmbiguityKind kind = AmbiguityKind::wasserstein;
  bool adjustable = false;
  double ct = 10.0;
};

// Small heterogeneous fleet with PV totals spread across the achievable load
// range, so the DR row actually binds.
inline PeriodInstance random_instance(std::uint64_t seed, const RandomSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  FleetModel fleet;
  for (std::size_t l = 0; l < spec.units; ++l) {
    BuildingParams b;
    b.P = 2.0 + 3.0 * U(rng);
    b.A = 0.985 + 0.01 * U(rng);
    b.B = -(0.4 + 0.5 * U(rng));
    fleet.buildings.push_back(b);
  }
  fleet.c_sys = 0.5 + U(rng);
  fleet.c_switch = 0.2 + U(rng);
  std::vector<double> x_prev;
  for (std::size_t l = 0; l < spec.units; ++l) x_prev.push_back(22.2 + 1.8 * U(rng));
  const double pmax = fleet.max_load();
  std::vector<double> totals;
  const double center = pmax * (0.3 + 0.4 * U(rng));
  for (std::size_t n = 0; n < spec.scenarios; ++n) totals.push_back(std::max(0.0, center + pmax * 0.35 * (U(rng) - 0.5)));
  AmbiguitySpec amb;
  amb.kind = spec.kind;
  amb.alpha = spec.alpha;
  amb.delta = spec.delta;
  amb.adjustable = spec.adjustable;
  amb.ct = spec.ct;
  return make_instance(fleet, x_prev, scenario_set_from_totals(totals), amb);
}

// Instance with prescribed totals and unit powers; thermal terms switched
// off except the switching cost.
inline PeriodInstance toy_instance(const std::vector<double>& totals, const std::vector<double>& powers, double alpha,
                                   double delta) {
  FleetModel fleet;
  for (double p : powers) {
    BuildingParams b;
    b.P = p;
    b.A = 0.5;
    b.B = 0.0;
    b.G = {11.5};  // x = 0.5 * 23 + 11.5 stays at the set-point
    b.v = {1.0};
    fleet.buildings.push_back(b);
  }
  fleet.c_sys = 0.0;
  fleet.c_switch = 1.0;
  AmbiguitySpec amb;
  amb.alpha = alpha;
  amb.delta = delta;
  PeriodInstance inst;
  inst.fleet = fleet;
  inst.x_prev = std::vector<double>(powers.size(), 23.0);
  inst.scenarios = scenario_set_from_totals(totals);
  inst.sorted = sort_totals(inst.scenarios, fleet);
  inst.moments = empirical_moments(inst.scenarios);
  inst.ambiguity = amb;
  return inst;
}

}  // namespace drcc::testing_support
