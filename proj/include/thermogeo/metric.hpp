#pragma once

#include <array>
#include <optional>

#include "thermogeo/models.hpp"

namespace thermogeo {

enum class MetricChart { EntropyVolume, EnergyVolume, Synthetic };

// Symmetric 2x2 Hessian metric with its first derivatives. Indices are 0-based
// in code: d(i, j, k) = d e_ij / d x_k.
struct MetricTensor2 {
  double e11 = 0.0, e12 = 0.0, e22 = 0.0;
  // e11_1, e11_2 (= e12_1), e12_2 (= e22_1), e22_2 stored as the six slots
  // {e11_1, e11_2, e12_1, e12_2, e22_1, e22_2}.
  std::array<double, 6> d{};
  MetricChart chart = MetricChart::EntropyVolume;

  double det() const { return e11 * e22 - e12 * e12; }
  double entry(int i, int j) const { return i == 0 && j == 0 ? e11 : (i == 1 && j == 1 ? e22 : e12); }
  double deriv(int i, int j, int k) const;

  // Metric of a potential from its second and third partials.
  static MetricTensor2 from_potential(double h11, double h12, double h22, double t111, double t112, double t122,
                                      double t222, MetricChart chart = MetricChart::Synthetic);
  static MetricTensor2 from_energy_jet(const EnergyJet& j);

  MetricTensor2 scaled(double c) const;
  MetricTensor2 swapped() const;  // relabel x1 <-> x2
};

// Largest violation of e11_2 = e12_1 and e12_2 = e22_1.
double hessian_closure_residual(const MetricTensor2& m);

MetricTensor2 weinhold_metric(const ConstitutiveModel& model, const StatePoint& s);
// Entries (1/Cv) [[T, -T alpha/k], [-T alpha/k, Cp/(V k)]] from response coefficients.
std::array<double, 3> weinhold_entries_from_coefficients(const Coefficients& c);

// Hessian of S(U,V) in the (U,V) chart. Entries come from response coefficients,
// derivatives from inverting the energy jet.
MetricTensor2 ruppeiner_metric(const ConstitutiveModel& model, const StatePoint& s);
// Same metric with entries also taken from the jet inversion.
MetricTensor2 ruppeiner_metric_from_jet(const EnergyJet& j);

struct DeterminantReport {
  double det = 0.0;
  double scale = 0.0;  // |e11 e22| + e12^2, for relative comparisons
  double residual_kvc = 0.0;
  double residual_dpdv = 0.0;
  std::optional<double> det_ideal_part;
  std::optional<double> det_correction;
  std::optional<double> residual_split;
};

DeterminantReport determinant_report(const ConstitutiveModel& model, const StatePoint& s);

struct Sym2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
};

// [[Cp/T, V alpha], [V alpha, k V]].
Sym2 inverse_metric(const ConstitutiveModel& model, const StatePoint& s);
// Plain inverse of the entry matrix.
Sym2 inverse_entries(const MetricTensor2& m);

enum class Signature { PositiveDefinite, NegativeDefinite, Indefinite, Degenerate };

std::string to_string(Signature s);

struct SignatureClass {
  Signature cls = Signature::Degenerate;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double discriminant = 0.0;
  // Classification from the signs of Cv and (dp/dV)_T when coefficients are given.
  std::optional<Signature> from_response;
};

SignatureClass eigen_signature(const MetricTensor2& m);
SignatureClass eigen_signature(const MetricTensor2& m, const Coefficients& c);

struct IdentityResiduals {
  double id1 = 0.0;
  double id1_scale = 0.0;
  double id2 = 0.0;
  double id2_scale = 0.0;
  std::optional<double> id3;
  std::optional<double> id3_scale;
  double cp_cv = 0.0;
  double cp_cv_scale = 0.0;
};

IdentityResiduals identity_residuals(const ConstitutiveModel& model, const StatePoint& s);

struct SoundSpeeds {
  double adiabatic = 0.0;
  double isothermal = 0.0;
};

SoundSpeeds speed_of_sound(const ConstitutiveModel& model, const StatePoint& s, double rho);

// (d e22/dS)_V - e22/Cv for constant-Cv models.
double delta_measure(const ConstitutiveModel& model, const StatePoint& s);

}  // namespace thermogeo
