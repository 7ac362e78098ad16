#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "thermogeo/models.hpp"

namespace thermogeo {

struct LocusSample {
  double v = 0.0, s = 0.0, t = 0.0, p = 0.0;
  double det_residual = 0.0;  // det / (|e11 e22| + e12^2) after refinement
};

struct LocusPolyline {
  std::string branch;
  std::string parameterization = "V";
  std::vector<LocusSample> samples;  // V increasing
};

// Degeneracy curve det = 0 sampled at n volumes spread evenly over [v_lo, v_hi].
// vdW and Berthelot use their closed forms; other models solve for T at each V.
LocusPolyline degeneracy_locus(const ConstitutiveModel& model, double v_lo, double v_hi, int n);

// Point of the locus at one volume, by the generic root solve.
LocusSample locus_point(const ConstitutiveModel& model, double v);

struct CriticalPoint {
  double v_c = 0.0, p_c = 0.0, t_c = 0.0;
  double s_c = 0.0;
  // Derivatives along the locus and of the isotherm at the critical point.
  double dt_dv_locus = 0.0;
  double dp_dv_locus = 0.0;
  double dp_dv_isotherm = 0.0;
  double d2p_dv2_isotherm = 0.0;
  // Mirror-image solution with T, p < 0 for the Berthelot square-root branches.
  bool has_negative_branch = false;
  double t_c_negative = 0.0, p_c_negative = 0.0;
};

// Maximum of T along the degeneracy locus, found as the root of dT/dV on the
// locus (implicit differentiation). The one-argument form searches V in
// (1.2, 40) times the covolume.
CriticalPoint critical_point(const ConstitutiveModel& model);
CriticalPoint critical_point(const ConstitutiveModel& model, double v_lo, double v_hi, int scan = 96);

// Closed forms, for comparison.
CriticalPoint vdw_critical_point(const GasParameters& p);
CriticalPoint berthelot_critical_point(const GasParameters& p);

struct ReducedPoint {
  double p_r = 0.0, t_r = 0.0;
  double p_r_sq = 0.0, t_r_sq = 0.0;
};

// Degeneracy locus in reduced variables as a function of v_r = V/V_c.
ReducedPoint reduced_curves(ModelKind kind, double v_r);

enum class RootVariable { Pressure, Temperature };

struct VolumeRoot {
  // 1 = largest, 2 = smallest, 3 = middle.
  int branch = 0;
  double v_r = 0.0;
  bool physical = false;  // v_r > 1/3
  double back_substitution = 0.0;  // |curve(v_r) - input|
  std::optional<double> trig;      // closed trigonometric form, where real
  double trig_mismatch = 0.0;
};

struct VolumeRoots {
  RootVariable of = RootVariable::Pressure;
  double value = 0.0;
  std::vector<VolumeRoot> roots;  // ordered by branch label
  std::vector<std::string> notes;
};

// Reduced volumes on the vdW locus at a given reduced pressure (0 < p_r <= 1)
// or temperature (0 < t_r <= 9/8). Roots come from the cubic; trigonometric
// forms are evaluated alongside.
VolumeRoots vdw_volume_roots(RootVariable of, double value);

struct CoexistencePoint {
  double t_r = 0.0;
  std::array<std::optional<double>, 3> p_r;  // index i-1 for branch i; empty if v_r <= 1/3
};

std::vector<CoexistencePoint> coexistence_curve(ModelKind kind, const std::vector<double>& t_r_samples);

// dp_r/dt_r along the reduced vdW locus.
double spinodal_slope(double v_r);

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 in increasing order, polished by Newton.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

}  // namespace thermogeo
