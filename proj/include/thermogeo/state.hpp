#pragma once

#include <cmath>
#include <string>

namespace thermogeo {

enum class Chart { EntropyVolume, TemperatureVolume };

std::string to_string(Chart chart);

// A point on the constitutive surface. x1 is molar entropy or temperature
// depending on the chart; x2 is always molar volume.
struct StatePoint {
  Chart chart = Chart::EntropyVolume;
  double x1 = 0.0;
  double x2 = 1.0;

  static StatePoint sv(double s, double v) { return {Chart::EntropyVolume, s, v}; }
  static StatePoint tv(double t, double v) { return {Chart::TemperatureVolume, t, v}; }

  double volume() const { return x2; }
};

struct GasParameters {
  double a = 0.0;
  double b = 0.0;
  double r_gas = 8.314;
  double cv0 = 1.5 * 8.314;
  double u0 = 0.0;
  double s0 = 0.0;

  // Throws DomainError when a parameter is out of range.
  void validate() const;
};

// Relative zero test for a 2x2 determinant against the size of its two products.
inline constexpr double kDegeneracyTolerance = 1e-9;

inline bool degenerate_2x2(double e11, double e12, double e22) {
  const double det = e11 * e22 - e12 * e12;
  const double scale = std::fmax(std::fabs(e11 * e22), e12 * e12);
  return !(std::fabs(det) >= kDegeneracyTolerance * scale) || scale == 0.0;
}

}  // namespace thermogeo
