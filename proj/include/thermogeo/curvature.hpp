#pragma once

#include <optional>
#include <vector>

#include "thermogeo/metric.hpp"
#include "thermogeo/models.hpp"

namespace thermogeo {

inline constexpr int kMaxFieldDimension = 6;

// Second and third partials of a potential at one point, in n <= 6 variables.
// Indices are 0-based; third(i, j, k) = d g_ij / d x_k.
class HessianMetricField {
 public:
  explicit HessianMetricField(int n);
  static HessianMetricField from_metric2(const MetricTensor2& m);

  int dimension() const { return n_; }
  double& metric(int i, int j) { return g_[idx(i, j)]; }
  double metric(int i, int j) const { return g_[idx(i, j)]; }
  double& third(int i, int j, int k) { return d_[idx(i, j, k)]; }
  double third(int i, int j, int k) const { return d_[idx(i, j, k)]; }

  // Largest departure from full index symmetry of the metric and third partials.
  double symmetry_residual() const;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }
  std::size_t idx(int i, int j, int k) const { return static_cast<std::size_t>((i * n_ + j) * n_ + k); }

  int n_;
  std::vector<double> g_;
  std::vector<double> d_;
};

// Inverse of the field's metric. Throws SingularState when it is degenerate.
std::vector<double> metric_inverse(const HessianMetricField& f);

// gamma(k, i, j) = Gamma^k_ij.
struct ChristoffelSymbols {
  int n = 0;
  std::vector<double> c;
  double operator()(int k, int i, int j) const { return c[static_cast<std::size_t>((k * n + i) * n + j)]; }
};

ChristoffelSymbols christoffel(const HessianMetricField& f);

struct RiemannRicci {
  int n = 0;
  std::vector<double> riemann;  // R^l_ijk
  std::vector<double> ricci;    // Ric_ik = R^j_ijk
  double curvature(int l, int i, int j, int k) const {
    return riemann[static_cast<std::size_t>(((l * n + i) * n + j) * n + k)];
  }
  double ric(int i, int k) const { return ricci[static_cast<std::size_t>(i * n + k)]; }
};

RiemannRicci riemann_ricci(const HessianMetricField& f);

struct TensorialCurvature {
  double value = 0.0;
  // Sum of the absolute terms of the full contraction; the natural size of R
  // when cancellation makes the value itself tiny.
  double scale = 0.0;
};

TensorialCurvature tensorial_curvature(const HessianMetricField& f);
double scalar_curvature_tensorial(const HessianMetricField& f);

// The 3x3 determinant of rows (e_ij, e_ij,1, e_ij,2) for ij = 11, 12, 22.
double closed2d_numerator(const MetricTensor2& m);
// Scalar curvature -num/(2 det^2). Gaussian curvature is half of it.
double scalar_curvature_closed2d(const MetricTensor2& m);
double gaussian_curvature_closed2d(const MetricTensor2& m);

struct CurvatureBreakdown {
  double h = 0.0, g = 0.0, f = 0.0, j = 0.0, d = 0.0, b = 0.0;
};

struct ElementaryCurvature {
  double value = 0.0;
  CurvatureBreakdown parts;
};

// Curvature of the energy Hessian from response coefficients and their partials.
ElementaryCurvature scalar_curvature_elementary(const Coefficients& c, const CoefficientPartials& d);

struct ConstantCvCurvature {
  double from_profile = 0.0;         // in f1, f2 and their V-derivatives
  double from_compressibility = 0.0; // in (d ln k / dS)_V
  double dlnk_ds = 0.0;
  double residual = 0.0;             // relative difference of the two forms
};

ConstantCvCurvature scalar_curvature_constant_cv(const ConstitutiveModel& model, const StatePoint& s);

// True iff -1/Cv < (d ln k / dS)_V < 0, i.e. the curvature is negative.
bool negativity_test(const ConstitutiveModel& model, const StatePoint& s);

// Closed forms in (T,V).
double vdw_scalar_curvature(const GasParameters& p, double t, double v);
double berthelot_scalar_curvature(const GasParameters& p, double t, double v);
// Older published polynomial form; kept for comparison, it does not match the
// other routes.
double berthelot_curvature_pqw(const GasParameters& p, double t, double v);

struct CurvatureReport {
  std::optional<double> r_tensorial;
  std::optional<double> r_closed2d;
  std::optional<double> r_elementary;
  std::optional<double> r_model_closed;
  std::optional<CurvatureBreakdown> breakdown;
  double curvature_scale = 0.0;
  double max_pairwise_residual = 0.0;
  // Berthelot only: the polynomial form and whether it disagrees.
  std::optional<double> r_printed_closed;
  bool printed_form_discrepancy = false;

  double value() const;  // first present route
};

inline constexpr double kRouteTolerance = 1e-8;
inline constexpr double kFdRouteTolerance = 1e-4;

CurvatureReport curvature_report(const ConstitutiveModel& model, const StatePoint& s);

// Relative difference of two curvature values, floored at 1e-6 of the scale.
double route_residual(double a, double b, double scale);

enum class LaplacianScheme { Analytic, FiniteDifference };

struct ConformalReport {
  double t = 0.0;
  double r_energy = 0.0;          // curvature of the energy Hessian in (S,V)
  double laplacian_ln_t = 0.0;
  double r_entropy = 0.0;         // T R_energy + T lap(ln T)
  double r_entropy_direct = 0.0;  // closed 2D route on minus the entropy Hessian in (U,V)
  double residual = 0.0;
};

// Curvature of the positive entropy metric -Hess S(U,V) from the energy metric
// and the Laplace-Beltrami of ln T.
ConformalReport ruppeiner_from_weinhold(const ConstitutiveModel& model, const StatePoint& s,
                                        LaplacianScheme scheme = LaplacianScheme::Analytic);

double laplacian_ln_temperature(const ConstitutiveModel& model, const StatePoint& s,
                                LaplacianScheme scheme = LaplacianScheme::Analytic);

enum class FlatCase { ExponentialF1, AffineF2, DegenerateF1Zero, NonFlat };

std::string to_string(FlatCase c);

struct FlatClassification {
  FlatCase kind = FlatCase::NonFlat;
  double exponential_residual = 0.0;  // max relative |f1 f1'' - f1'^2|
  double affine_residual = 0.0;       // max relative |f2''|
  int samples = 0;
};

// Grid test of the three flat cases on [v_lo, v_hi].
FlatClassification zero_curvature_classify(const ConstantCvProfile& prof, double v_lo, double v_hi,
                                           int samples = 65);
FlatClassification zero_curvature_classify(const ConstitutiveModel& model, double v_lo, double v_hi,
                                           int samples = 65);

}  // namespace thermogeo
