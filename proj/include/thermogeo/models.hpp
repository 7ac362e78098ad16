#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "thermogeo/state.hpp"
#include "thermogeo/taylor.hpp"

namespace thermogeo {

// Energy U(S,V) with all partial derivatives through total order three,
// evaluated at (s, v).
struct EnergyJet {
  double s = 0.0;
  double v = 0.0;
  double u = 0.0;
  double u_s = 0.0, u_v = 0.0;
  double u_ss = 0.0, u_sv = 0.0, u_vv = 0.0;
  double u_sss = 0.0, u_ssv = 0.0, u_svv = 0.0, u_vvv = 0.0;

  double temperature() const { return u_s; }
  double pressure() const { return -u_v; }
};

// Helmholtz free energy A(T,V) with partials through order three.
struct HelmholtzJet {
  double t = 0.0;
  double v = 0.0;
  double a = 0.0;
  double a_t = 0.0, a_v = 0.0;
  double a_tt = 0.0, a_tv = 0.0, a_vv = 0.0;
  double a_ttt = 0.0, a_ttv = 0.0, a_tvv = 0.0, a_vvv = 0.0;
};

// Legendre transform of a Helmholtz jet into the energy jet at S = -A_T.
EnergyJet energy_jet_from_helmholtz(const HelmholtzJet& h);

struct Coefficients {
  double v = 0.0;  // molar volume the coefficients refer to
  double t = 0.0;
  double p = 0.0;
  double cv = 0.0;
  double cp = 0.0;
  double alpha = 0.0;
  double k = 0.0;
};

// Partials of the response coefficients in the (S,V) chart: d/dS at constant V
// and d/dV at constant S.
struct CoefficientPartials {
  double dcv_dS = 0.0, dcv_dV = 0.0;
  double dalpha_dS = 0.0, dalpha_dV = 0.0;
  double dk_dS = 0.0, dk_dV = 0.0;
};

// Coefficients and their (S,V) partials implied by any energy jet.
Coefficients coefficients_from_jet(const EnergyJet& j);
CoefficientPartials coefficient_partials_from_jet(const EnergyJet& j);

enum class ModelKind { IdealGas, VanDerWaals, Berthelot, ConstantCv, NumericEnergy };

std::string to_string(ModelKind kind);

// Function of V with derivatives through order three.
using Profile = std::function<Taylor3(double v)>;

// U = u0 + f1(V) exp((S - s0)/cv) - cv f2(V).
struct ConstantCvProfile {
  Profile f1;
  Profile f2;
  double cv = 1.0;
  double u0 = 0.0;
  double s0 = 0.0;
};

class ConstitutiveModel {
 public:
  virtual ~ConstitutiveModel() = default;

  virtual ModelKind kind() const = 0;
  virtual std::string name() const = 0;

  // Lower bound on admissible volume (covolume b, or 0).
  virtual double min_volume() const { return 0.0; }

  virtual EnergyJet energy_jet(const StatePoint& s) const = 0;

  // Entropy at (T,V). The default inverts T = U_S by safeguarded Newton.
  virtual double entropy_at(double t, double v) const;
  // Temperature at (S,V).
  virtual double temperature_at(double s, double v) const;

  virtual double pressure(const StatePoint& s) const;
  virtual Coefficients coefficients(const StatePoint& s) const;
  virtual CoefficientPartials coefficient_partials(const StatePoint& s) const;
  // (dp/dV) at constant T.
  virtual double isothermal_dp_dv(const StatePoint& s) const;

  virtual std::optional<ConstantCvProfile> constant_cv_profile() const { return std::nullopt; }
  virtual bool has_constant_cv() const { return constant_cv_profile().has_value(); }

  // Throws DomainError if the state is outside the admissible domain.
  void check_admissible(const StatePoint& s) const;
  StatePoint to_entropy_chart(const StatePoint& s) const;
  StatePoint to_temperature_chart(const StatePoint& s) const;
};

using ModelPtr = std::shared_ptr<const ConstitutiveModel>;

class IdealGas final : public ConstitutiveModel {
 public:
  explicit IdealGas(GasParameters p);

  ModelKind kind() const override { return ModelKind::IdealGas; }
  std::string name() const override { return "ideal"; }
  const GasParameters& parameters() const { return p_; }

  EnergyJet energy_jet(const StatePoint& s) const override;
  double entropy_at(double t, double v) const override;
  double pressure(const StatePoint& s) const override;
  Coefficients coefficients(const StatePoint& s) const override;
  CoefficientPartials coefficient_partials(const StatePoint& s) const override;
  double isothermal_dp_dv(const StatePoint& s) const override;
  std::optional<ConstantCvProfile> constant_cv_profile() const override;

 private:
  GasParameters p_;
};

class VanDerWaals final : public ConstitutiveModel {
 public:
  explicit VanDerWaals(GasParameters p);

  ModelKind kind() const override { return ModelKind::VanDerWaals; }
  std::string name() const override { return "vdw"; }
  double min_volume() const override { return p_.b; }
  const GasParameters& parameters() const { return p_; }

  EnergyJet energy_jet(const StatePoint& s) const override;
  double entropy_at(double t, double v) const override;
  double pressure(const StatePoint& s) const override;
  Coefficients coefficients(const StatePoint& s) const override;
  CoefficientPartials coefficient_partials(const StatePoint& s) const override;
  double isothermal_dp_dv(const StatePoint& s) const override;
  std::optional<ConstantCvProfile> constant_cv_profile() const override;

 private:
  GasParameters p_;
};

// Native chart is (T,V); generated by the Helmholtz function
// A = u0 - T s0 - R T ln(V-b) - a/(T V) - cv0 T ln T + cv0 T,
// whose heat capacity is cv0 + 2a/(V T^2).
class Berthelot final : public ConstitutiveModel {
 public:
  explicit Berthelot(GasParameters p);

  ModelKind kind() const override { return ModelKind::Berthelot; }
  std::string name() const override { return "berthelot"; }
  double min_volume() const override { return p_.b; }
  const GasParameters& parameters() const { return p_; }

  HelmholtzJet helmholtz_jet(double t, double v) const;
  EnergyJet energy_jet(const StatePoint& s) const override;
  double entropy_at(double t, double v) const override;
  double temperature_at(double s, double v) const override;
  double pressure(const StatePoint& s) const override;
  Coefficients coefficients(const StatePoint& s) const override;
  CoefficientPartials coefficient_partials(const StatePoint& s) const override;
  double isothermal_dp_dv(const StatePoint& s) const override;

 private:
  GasParameters p_;
};

class ConstantCv final : public ConstitutiveModel {
 public:
  // v_min bounds the admissible volume from below (exclusive).
  ConstantCv(Profile f1, Profile f2, double cv, double u0 = 0.0, double v_min = 0.0);

  ModelKind kind() const override { return ModelKind::ConstantCv; }
  std::string name() const override { return "constant-cv"; }
  double min_volume() const override { return v_min_; }

  EnergyJet energy_jet(const StatePoint& s) const override;
  double entropy_at(double t, double v) const override;
  std::optional<ConstantCvProfile> constant_cv_profile() const override { return profile_; }

 private:
  ConstantCvProfile profile_;
  double v_min_;
};

// Energy supplied as a plain function of (S,V). Derivatives come either from an
// analytic callback or from central finite differences.
class NumericEnergy final : public ConstitutiveModel {
 public:
  using EnergyFn = std::function<double(double s, double v)>;
  using JetFn = std::function<EnergyJet(double s, double v)>;

  explicit NumericEnergy(EnergyFn u, double v_min = 0.0);
  NumericEnergy(EnergyFn u, JetFn analytic, double v_min = 0.0);

  ModelKind kind() const override { return ModelKind::NumericEnergy; }
  std::string name() const override { return "numeric"; }
  double min_volume() const override { return v_min_; }
  bool uses_finite_differences() const { return !analytic_; }

  EnergyJet energy_jet(const StatePoint& s) const override;

 private:
  EnergyJet fd_jet(double s, double v) const;

  EnergyFn u_;
  JetFn analytic_;
  double v_min_;
};

// Energy jet of the constant-Cv family at (S,V).
EnergyJet constant_cv_jet(const ConstantCvProfile& prof, double s, double v);

// Finite-difference wrapper around any model's energy (FD derivative scheme).
std::shared_ptr<NumericEnergy> numeric_wrapper(ModelPtr model);

double energy(const ConstitutiveModel& model, const StatePoint& s);
std::pair<double, double> first_derivatives(const ConstitutiveModel& model, const StatePoint& s);
Coefficients coefficients(const ConstitutiveModel& model, const StatePoint& s);
CoefficientPartials coefficient_partials(const ConstitutiveModel& model, const StatePoint& s);

// Closed-form vdW entropy S(U,V).
double vdw_entropy(const GasParameters& p, double u, double v);

// Central-difference step for derivative order 1, 2 or 3 around x.
double fd_step(double x, int order);

}  // namespace thermogeo
