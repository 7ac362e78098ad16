#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "thermogeo/metric.hpp"

namespace thermogeo {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

// Symmetric 2x2 matrix (a, b, c) -> (a, sqrt(2) b, c). The trace pairing
// Tr(AB) becomes the Euclidean dot product.
Vec3 embed_symmetric(double a, double b, double c);

// Image of a state under the Hessian map, with the tangent frame and normal
// of the image surface in the embedded coordinates.
struct HessianPoint {
  Vec3 matrix{};  // (e11, e12, e22)
  Vec3 euclid{};
  Vec3 r1{}, r2{};
  Vec3 normal{};  // r1 x r2
};

// Throws FrameSingular when r1 and r2 are (numerically) parallel.
HessianPoint hessian_point(const MetricTensor2& m);
HessianPoint hessian_map(const ConstitutiveModel& model, const StatePoint& s);

enum class RadialClass { RadiallyConvex, RadiallyConcave, Tangent };

std::string to_string(RadialClass c);

// Sign that turns the raw pairing <Hess, r1 x r2> into one that is positive
// exactly where the scalar curvature is positive.
inline constexpr double kOrientation = -1.0;

struct RadialPairing {
  double raw = 0.0;       // <Hess, r1 x r2>
  double oriented = 0.0;  // kOrientation * raw
  RadialClass cls = RadialClass::Tangent;
};

RadialPairing radial_pairing(const HessianPoint& hp);

// Recomputes the orientation sign from a vdW state with positive curvature.
double calibrate_orientation();

// e11 e22 - e12^2.
double cone_residual(const MetricTensor2& m);

struct SurfaceResidual {
  double value = 0.0;
  double scale = 0.0;  // sum of absolute terms
  double relative() const { return scale == 0.0 ? 0.0 : std::fabs(value) / scale; }
};

// r_gas e11 e22 - cp e12^2: zero on the ideal-gas Hessian surface. cp is the
// constant cv0 + r_gas, not the state's own heat capacity.
SurfaceResidual ideal_conic_residual(const MetricTensor2& m, double cp, double r_gas);
// (b e12 - R e11)^3 (R e11 e22 - cp e12^2) + 2 a R e11 e12^3 with cp = cv0 + R:
// zero on the vdW surface.
SurfaceResidual vdw_quintic_residual(const MetricTensor2& m, const GasParameters& p);

// Best constant normal gamma with gamma . (e11, e12, e22) = 0 over a sample of
// points (plane case of a flat Hessian surface).
struct PlaneFit {
  Vec3 gamma{};
  double discriminant = 0.0;  // g1 g3 - g2^2 / 4
  double residual = 0.0;      // rms of gamma . point over rms point size
};

PlaneFit plane_normal_fit(std::span<const HessianPoint> points);

}  // namespace thermogeo
