#pragma once

#include <span>
#include <vector>

#include "oscul/point_cloud.hpp"

namespace oscul {

enum class SphereKind { Round, Flat };

/// A (d-1)-sphere in R^d, or its hyperplane limit when the fitted points are
/// (numerically) affinely dependent.
///
/// Round spheres use center/radius; flat ones use a unit normal and offset
/// so that the surface is {x : <normal, x> = offset}. `apex` is the point the
/// sphere was fitted at and always lies on the surface.
struct GeneralizedSphere {
  SphereKind kind = SphereKind::Round;
  Vector center;
  double radius = 0.0;
  Vector normal;
  double offset = 0.0;
  Vector apex;

  static GeneralizedSphere round(Vector center, double radius, Vector apex);
  static GeneralizedSphere flat(Vector normal, double offset, Vector apex);

  bool is_flat() const { return kind == SphereKind::Flat; }
  Eigen::Index dim() const { return apex.size(); }

  /// Unit vector at `apex` perpendicular to the surface. For round spheres it
  /// points from the apex toward the center.
  Vector inward_normal() const;
};

struct FitDiagnostics {
  double condition_estimate = 1.0;
  double residual_max = 0.0;
  double epsilon_used = 1.0;
};

struct SphereFit {
  GeneralizedSphere sphere;
  FitDiagnostics diagnostics;
};

// Switch to the flat branch when the quadratic coefficient of the sphere
// equation falls below this fraction of the linear coefficients' scale...
inline constexpr double kFlatLeadingCoefficientRatio = 1e-10;
// ...or when the radius exceeds this multiple of the simplex diameter.
inline constexpr double kFlatRadiusToDiameter = 1e8;
// Singular values below this fraction of the largest mean affine dependence.
inline constexpr double kSingularRatio = 1e-14;
inline constexpr double kCoincidenceTolerance = 1e-12;

/// Sphere through d+1 points of R^d, solved as a linear system in coordinates
/// relative to the first point. The first point becomes the apex.
SphereFit circumsphere(std::span<const Vector> simplex_points);

/// (1 - epsilon) * apex + epsilon * neighbor for each neighbor.
std::vector<Vector> contract_neighbors(const Vector& apex, std::span<const Vector> neighbors,
                                       double epsilon);

/// Circumsphere of the apex and its contracted neighbors.
///
/// Computed as the circumsphere of the uncontracted set scaled about the apex
/// by epsilon, which is the same sphere: contraction is a homothety centred at
/// the apex. This keeps the relative accuracy independent of epsilon.
SphereFit osculating_sphere(const Vector& apex, std::span<const Vector> neighbors, double epsilon);

/// 1/radius for round spheres, 0 for flat ones.
double curvature(const GeneralizedSphere& sphere);

/// Signed distance from the surface: ||p - c|| - r, or <n, p> - offset.
double sphere_residual(const GeneralizedSphere& sphere, const Vector& point);

/// radius / epsilon_used; +infinity for flat fits.
double normalized_radius(const SphereFit& fit);

/// Monic sphere equation ||x||^2 + <linear, x> + constant = 0.
struct SphereEquation {
  Vector linear;
  double constant = 0.0;
};

SphereEquation sphere_equation(const GeneralizedSphere& sphere);

/// Round sphere from a monic equation. The apex is placed at the surface
/// point nearest to `apex_hint`.
GeneralizedSphere sphere_from_equation(const SphereEquation& equation, const Vector& apex_hint);

}  // namespace oscul
