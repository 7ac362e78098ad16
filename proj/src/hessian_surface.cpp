#include "thermogeo/hessian_surface.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "thermogeo/errors.hpp"

namespace thermogeo {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 embed_symmetric(double a, double b, double c) { return {a, std::sqrt(2.0) * b, c}; }

HessianPoint hessian_point(const MetricTensor2& m) {
  HessianPoint hp;
  hp.matrix = {m.e11, m.e12, m.e22};
  hp.euclid = embed_symmetric(m.e11, m.e12, m.e22);
  hp.r1 = embed_symmetric(m.deriv(0, 0, 0), m.deriv(0, 1, 0), m.deriv(1, 1, 0));
  hp.r2 = embed_symmetric(m.deriv(0, 0, 1), m.deriv(0, 1, 1), m.deriv(1, 1, 1));
  hp.normal = cross(hp.r1, hp.r2);
  const double frame = norm(hp.r1) * norm(hp.r2);
  if (!(norm(hp.normal) > 1e-12 * frame) || frame == 0.0)
    throw FrameSingular("Hessian map has a singular frame here (r1 parallel to r2)");
  return hp;
}

HessianPoint hessian_map(const ConstitutiveModel& model, const StatePoint& s) {
  return hessian_point(weinhold_metric(model, s));
}

std::string to_string(RadialClass c) {
  switch (c) {
    case RadialClass::RadiallyConvex: return "radially-convex";
    case RadialClass::RadiallyConcave: return "radially-concave";
    case RadialClass::Tangent: return "tangent";
  }
  return "unknown";
}

RadialPairing radial_pairing(const HessianPoint& hp) {
  RadialPairing out;
  out.raw = dot(hp.euclid, hp.normal);
  out.oriented = kOrientation * out.raw;
  const double band = 1e-9 * norm(hp.euclid) * norm(hp.normal);
  if (std::fabs(out.raw) < band)
    out.cls = RadialClass::Tangent;
  else
    out.cls = out.oriented > 0.0 ? RadialClass::RadiallyConvex : RadialClass::RadiallyConcave;
  return out;
}

double calibrate_orientation() {
  GasParameters p;
  p.a = 1.0;
  p.b = 1.0;
  p.r_gas = 1.0;
  p.cv0 = 1.5;
  const VanDerWaals vdw(p);
  // Well inside the stable region, where the closed form gives R > 0.
  const double raw = radial_pairing(hessian_map(vdw, StatePoint::tv(2.0, 3.0))).raw;
  return raw > 0.0 ? 1.0 : -1.0;
}

double cone_residual(const MetricTensor2& m) { return m.e11 * m.e22 - m.e12 * m.e12; }

SurfaceResidual ideal_conic_residual(const MetricTensor2& m, double cp, double r_gas) {
  const double x = r_gas * m.e11 * m.e22, y = cp * m.e12 * m.e12;
  return {x - y, std::fabs(x) + std::fabs(y)};
}

SurfaceResidual vdw_quintic_residual(const MetricTensor2& m, const GasParameters& p) {
  const double r = p.r_gas, cp = p.cv0 + p.r_gas;
  const double lin = p.b * m.e12 - r * m.e11;
  const double cube = lin * lin * lin;
  const double quad = r * m.e22 * m.e11 - cp * m.e12 * m.e12;
  const double corr = 2.0 * p.a * r * m.e11 * m.e12 * m.e12 * m.e12;
  const double cube_scale = std::pow(std::fabs(p.b * m.e12) + std::fabs(r * m.e11), 3);
  return {cube * quad + corr,
          cube_scale * (std::fabs(r * m.e22 * m.e11) + std::fabs(cp * m.e12 * m.e12)) + std::fabs(corr)};
}

PlaneFit plane_normal_fit(std::span<const HessianPoint> points) {
  if (points.size() < 3) throw DomainError("plane fit needs at least three points");
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const HessianPoint& hp : points) {
    const Eigen::Vector3d x(hp.matrix[0], hp.matrix[1], hp.matrix[2]);
    scatter += x * x.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d g = eig.eigenvectors().col(0);
  PlaneFit fit;
  fit.gamma = {g[0], g[1], g[2]};
  fit.discriminant = g[0] * g[2] - 0.25 * g[1] * g[1];
  const double total = scatter.trace();
  fit.residual = total > 0.0 ? std::sqrt(std::fmax(eig.eigenvalues()[0], 0.0) / total) : 0.0;
  return fit;
}

}  // namespace thermogeo
