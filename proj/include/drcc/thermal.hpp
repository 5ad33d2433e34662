#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace drcc {

enum class Provenance { given, discretized };

// Discrete-time single-zone building: x' = A x + B u + G.v with u in {0,1}.
struct BuildingParams {
  double A = 0.9914;
  double B = -0.6767;
  std::vector<double> G{4.3e-5, 0.0086};
  // Default disturbance: 1000 units of external gain and 32 C outdoors,
  // a hot afternoon that drifts an idle zone upward by about 0.12 C per step.
  std::vector<double> v{1000.0, 32.0};
  double P = 3.5;  // kW drawn while ON
  Provenance provenance = Provenance::given;

  double disturbance() const {
    if (G.size() != v.size()) throw std::invalid_argument("building: G and v have different lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) s += G[i] * v[i];
    return s;
  }
};

struct FleetModel {
  std::vector<BuildingParams> buildings;
  double x_ref = 23.0;
  double x_min = 21.5;
  double x_max = 24.5;
  double c_sys = 1.0;
  double c_switch = 1.0;
  double c_pv = 1.0;
  double dt_seconds = 600.0;

  std::size_t size() const { return buildings.size(); }
  double max_load() const {
    double s = 0.0;
    for (const BuildingParams& b : buildings) s += b.P;
    return s;
  }
  void validate() const {
    if (buildings.empty()) throw std::invalid_argument("fleet: no buildings");
    if (!(x_min < x_ref && x_ref < x_max)) throw std::invalid_argument("fleet: need x_min < x_ref < x_max");
    if (c_sys < 0 || c_switch < 0 || c_pv < 0) throw std::invalid_argument("fleet: cost weights must be >= 0");
    for (const BuildingParams& b : buildings) {
      if (!(b.A > 0.0 && b.A < 1.0)) throw std::invalid_argument("fleet: A must lie in (0,1)");
      if (!(b.P > 0.0)) throw std::invalid_argument("fleet: P must be positive");
      (void)b.disturbance();
    }
  }
};

// Continuous-time RC model; the disturbance channels are outdoor temperature
// (through R) and an external heat gain (through C).
struct ContinuousRc {
  double R = 0.0;       // K/kW
  double C = 0.0;       // kJ/K
  double Q_hvac = 0.0;  // kW
  double T_out = 0.0;
  double Q_out = 0.0;
};

// Zero-order hold with a = -1/(RC). Disturbances are ordered (Q_out, T_out)
// to line up with the default gain vector.
inline BuildingParams discretize_rc(const ContinuousRc& rc, double dt_seconds, double power_kw = 3.5) {
  if (!(rc.R > 0.0) || !(rc.C > 0.0)) throw std::invalid_argument("discretize_rc: R and C must be positive");
  if (!(dt_seconds > 0.0)) throw std::invalid_argument("discretize_rc: dt must be positive");
  const double a = -1.0 / (rc.R * rc.C);
  const double A = std::exp(a * dt_seconds);
  // (A - 1)/a, written with expm1 to stay accurate for small dt.
  const double k = std::expm1(a * dt_seconds) / a;
  BuildingParams p;
  p.A = A;
  p.B = k * (-rc.Q_hvac / rc.C);
  p.G = {k / rc.C, k / (rc.R * rc.C)};
  p.v = {rc.Q_out, rc.T_out};
  p.P = power_kw;
  p.provenance = Provenance::discretized;
  return p;
}

inline double step_temperature(const BuildingParams& p, double x_prev, int u) {
  return p.A * x_prev + p.B * u + p.disturbance();
}

inline double comfort_deviation(double x, double x_ref) { return std::abs(x - x_ref); }

inline FleetModel identical_fleet(std::size_t count, const BuildingParams& unit = {}) {
  FleetModel f;
  f.buildings.assign(count, unit);
  return f;
}

inline std::vector<double> initial_temperatures(std::size_t count, std::uint64_t seed, double lo = 23.10,
                                                double hi = 23.15) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> x(count);
  for (double& xi : x) xi = dist(rng);
  return x;
}

}  // namespace drcc
