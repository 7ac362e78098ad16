#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "thermogeo/models.hpp"

namespace testsupport {

using thermogeo::GasParameters;
using thermogeo::StatePoint;

inline GasParameters unit_gas(double a, double b, double cv0 = 1.5) {
  GasParameters p;
  p.a = a;
  p.b = b;
  p.r_gas = 1.0;
  p.cv0 = cv0;
  return p;
}

inline double rel(double a, double b, double floor = 0.0) {
  const double s = std::fmax(std::fmax(std::fabs(a), std::fabs(b)), floor);
  return s == 0.0 ? 0.0 : std::fabs(a - b) / s;
}

// Temperature of the vdW (berthelot = false) or Berthelot (true) degeneracy locus.
inline double locus_temperature(const GasParameters& p, double v, bool berthelot) {
  const double q = 2.0 * p.a * (v - p.b) * (v - p.b) / (p.r_gas * v * v * v);
  return berthelot ? std::sqrt(q) : q;
}

enum class Region { Stable, Unstable, Either };

// Random (T,V) states at least a fixed factor away from the degeneracy locus.
inline std::vector<StatePoint> random_states(const GasParameters& p, bool berthelot, int n, unsigned seed,
                                             Region region = Region::Stable, double vlo = 1.4,
                                             double vhi = 8.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uv(vlo, vhi), up(1.3, 4.0), dn(0.2, 0.75), coin(0.0, 1.0);
  std::vector<StatePoint> out;
  for (int i = 0; i < n; ++i) {
    const double v = p.b + uv(rng);
    double tl = locus_temperature(p, v, berthelot);
    if (tl <= 0.0) tl = 1.0;
    bool stable = region == Region::Stable || (region == Region::Either && coin(rng) < 0.5);
    const double t = stable ? up(rng) * tl : dn(rng) * tl;
    out.push_back(StatePoint::tv(t, v));
  }
  return out;
}

}  // namespace testsupport
