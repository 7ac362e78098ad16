#pragma once

#include <string>
#include <vector>

#include "thermogeo/metric.hpp"

namespace thermogeo {

// Position in the (S,V) chart, velocity, and affine parameter.
struct GeodesicState {
  double s = 0.0, v = 0.0;
  double s_dot = 0.0, v_dot = 0.0;
  double t = 0.0;
};

// Weinhold Christoffel symbols in the (S,V) chart, index 1 = S, 2 = V, with
// the auxiliary combinations they are built from.
struct ChristoffelSet {
  double g111 = 0.0, g112 = 0.0, g122 = 0.0;
  double g211 = 0.0, g212 = 0.0, g222 = 0.0;
  double f = 0.0, j = 0.0, d = 0.0, b = 0.0;

  // Gamma^k_ij with 0-based indices.
  double operator()(int k, int i, int j) const;
};

// Explicit coefficients from response functions. Throws SingularState on a
// degenerate metric or where alpha = 0.
ChristoffelSet christoffel_elementary(const Coefficients& c, const CoefficientPartials& d);
ChristoffelSet christoffel_elementary(const ConstitutiveModel& model, const StatePoint& s);

// Same symbols from the metric and its derivatives (curvature module route).
ChristoffelSet christoffel_from_metric(const MetricTensor2& m);

// Constant-Cv specialization, built from the coefficients with G = 0, J = 1 and
// D = alpha/k substituted.
ChristoffelSet christoffel_constant_cv(const Coefficients& c, const CoefficientPartials& d);

// d2S/dt2 and d2V/dt2 for the given velocities.
struct Acceleration {
  double s_ddot = 0.0, v_ddot = 0.0;
};

Acceleration geodesic_acceleration(const ChristoffelSet& g, double s_dot, double v_dot);

// eta(u, u) at the state.
double metric_speed(const MetricTensor2& m, double s_dot, double v_dot);

enum class ChristoffelRoute { Elementary, Metric };

enum class GeodesicStop { Completed, DomainExit, LocusProximity };

std::string to_string(GeodesicStop stop);

struct GeodesicSample {
  GeodesicState state;
  double speed = 0.0;     // eta(u, u)
  double det_rel = 0.0;   // det / (|e11 e22| + e12^2)
};

struct GeodesicOptions {
  double tol = 1e-10;
  double initial_step = 1e-3;
  double locus_guard = 1e-6;
  int max_steps = 2000000;
  // Extra output at these parameter values. Steps are shortened to land on
  // them, so these are integrator nodes rather than interpolated points.
  std::vector<double> sample_times;
  ChristoffelRoute route = ChristoffelRoute::Elementary;
};

struct Trajectory {
  std::vector<GeodesicSample> steps;  // accepted integrator steps, starting with the initial state
  std::vector<GeodesicSample> dense;  // at options.sample_times in [t0, t_end] reached before stopping
  GeodesicStop stop = GeodesicStop::Completed;
  std::string reason;
  int rejected = 0;

  double max_speed_drift() const;  // max |speed - speed0| / |speed0|
};

// Dormand-Prince 5(4) with local error per step at most tol (1 + |y|).
// Stops early on leaving the model's domain or on approaching det = 0.
// Throws StepFailure when the step size collapses away from any boundary.
Trajectory integrate_geodesic(const ConstitutiveModel& model, const GeodesicState& init, double t_end,
                              const GeodesicOptions& options = {});

// Initial state at (T,V) with the given velocity in the (S,V) chart.
GeodesicState geodesic_start(const ConstitutiveModel& model, const StatePoint& at, double s_dot, double v_dot);

struct DeviationSample {
  double t = 0.0;
  double separation = 0.0;  // |J|_eta
};

// First-order deviation of geodesics launched from x0 +/- eps w with velocity
// parallel-transported along w. In a flat region the separation stays constant.
std::vector<DeviationSample> geodesic_deviation(const ConstitutiveModel& model, const GeodesicState& init,
                                                double w_s, double w_v, double t_end, int samples,
                                                double eps = 1e-5, double tol = 1e-12);

}  // namespace thermogeo
