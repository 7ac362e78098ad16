#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

namespace thermogeo::detail {

using ScalarFn = std::function<double(double)>;

// Hybrid Newton/bisection on a sign-changing bracket [lo, hi]. Converges when
// the bracket width or the Newton step falls below xtol*(1+|x|).
double newton_bisect(const ScalarFn& f, const ScalarFn& df, double lo, double hi, double xtol = 1e-15,
                     int max_iter = 200);

// Expands outward from x0 in steps that double until f changes sign. Returns
// a bracket, or nothing after max_steps expansions in each direction.
std::optional<std::pair<double, double>> expand_bracket(const ScalarFn& f, double x0, double step,
                                                       int max_steps = 80);

inline double rel_diff(double a, double b, double floor = 0.0) {
  const double scale = std::fmax(std::fmax(std::fabs(a), std::fabs(b)), floor);
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace thermogeo::detail
