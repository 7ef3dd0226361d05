#include "oscul/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "oscul/error.hpp"

namespace oscul {

GeneralizedSphere GeneralizedSphere::round(Vector center, double radius, Vector apex) {
  GeneralizedSphere s;
  s.kind = SphereKind::Round;
  s.center = std::move(center);
  s.radius = radius;
  s.apex = std::move(apex);
  return s;
}

GeneralizedSphere GeneralizedSphere::flat(Vector normal, double offset, Vector apex) {
  GeneralizedSphere s;
  s.kind = SphereKind::Flat;
  s.normal = std::move(normal);
  s.offset = offset;
  s.apex = std::move(apex);
  return s;
}

Vector GeneralizedSphere::inward_normal() const {
  if (is_flat()) return normal;
  return (center - apex).normalized();
}

namespace {

struct RelativeFit {
  bool flat = false;
  Vector center;  // relative to the base point, unscaled
  double radius = 0.0;
  Vector normal;
  double condition = 1.0;
};

// Hyperplane normals carry no orientation; pick the sign that makes the
// largest-magnitude component positive so equal inputs give equal output.
Vector canonical_normal(Vector n) {
  Eigen::Index k = 0;
  n.cwiseAbs().maxCoeff(&k);
  if (n(k) < 0.0) n = -n;
  return n;
}

// Sphere through the origin and the rows of `rel` (d x d).
RelativeFit fit_through_origin(const Eigen::MatrixXd& rel) {
  const Eigen::Index d = rel.rows();
  const double scale = rel.rowwise().norm().maxCoeff();
  const Eigen::MatrixXd z = rel / scale;
  const Vector half_sq = 0.5 * z.rowwise().squaredNorm().transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(d - 1);

  RelativeFit out;
  out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();

  if (smin <= kSingularRatio * smax) {
    // Affinely dependent: every row is orthogonal to the last right singular vector.
    out.flat = true;
    out.normal = canonical_normal(svd.matrixV().col(d - 1).normalized());
    return out;
  }

  const Vector cz = svd.solve(half_sq);
  const double rz = cz.norm();

  double diameter = z.rowwise().norm().maxCoeff();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      diameter = std::max(diameter, (z.row(i) - z.row(j)).norm());
    }
  }
  // In scaled coordinates the equation is ||z||^2 - 2<cz, z> = 0.
  const bool tiny_leading = 1.0 < kFlatLeadingCoefficientRatio * 2.0 * rz;
  if (tiny_leading || rz > kFlatRadiusToDiameter * diameter) {
    out.flat = true;
    out.normal = canonical_normal(cz / rz);
    return out;
  }
  out.center = scale * cz;
  out.radius = scale * rz;
  return out;
}

void require_finite(const Vector& p, const char* what) {
  if (!p.allFinite()) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " has a non-finite coordinate");
  }
}

SphereFit finish(const RelativeFit& rel, const Vector& apex, double epsilon,
                 std::span<const Vector> surface_points) {
  SphereFit fit;
  if (rel.flat) {
    fit.sphere = GeneralizedSphere::flat(rel.normal, rel.normal.dot(apex), apex);
  } else {
    fit.sphere = GeneralizedSphere::round(apex + epsilon * rel.center, epsilon * rel.radius, apex);
  }
  fit.diagnostics.condition_estimate = std::max(1.0, rel.condition);
  fit.diagnostics.epsilon_used = epsilon;
  double worst = 0.0;
  for (const auto& p : surface_points) {
    worst = std::max(worst, std::abs(sphere_residual(fit.sphere, p)));
  }
  fit.diagnostics.residual_max = worst;
  return fit;
}

}  // namespace

SphereFit circumsphere(std::span<const Vector> pts) {
  if (pts.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "circumsphere needs d+1 points, got none");
  }
  const Eigen::Index d = pts.front().size();
  if (static_cast<Eigen::Index>(pts.size()) != d + 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "circumsphere in R^" + std::to_string(d) + " needs " + std::to_string(d + 1) +
                    " points, got " + std::to_string(pts.size()));
  }
  for (const auto& p : pts) {
    if (p.size() != d) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
    require_finite(p, "simplex point");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if ((pts[i] - pts[j]).norm() < kCoincidenceTolerance) {
        throw Error(ErrorCode::CoincidentPoints,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  Eigen::MatrixXd rel(d, d);
  for (Eigen::Index i = 0; i < d; ++i) rel.row(i) = (pts[i + 1] - pts[0]).transpose();
  return finish(fit_through_origin(rel), pts[0], 1.0, pts);
}

std::vector<Vector> contract_neighbors(const Vector& apex, std::span<const Vector> neighbors,
                                       double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
  std::vector<Vector> out;
  out.reserve(neighbors.size());
  for (const auto& nb : neighbors) {
    if (nb.size() != apex.size()) throw Error(ErrorCode::DimensionMismatch, "neighbor dimension differs from apex");
    out.push_back(epsilon == 1.0 ? nb : Vector((1.0 - epsilon) * apex + epsilon * nb));
  }
  return out;
}

SphereFit osculating_sphere(const Vector& apex, std::span<const Vector> neighbors, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
  const Eigen::Index d = apex.size();
  if (static_cast<Eigen::Index>(neighbors.size()) != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "osculating fit in R^" + std::to_string(d) + " needs " + std::to_string(d) +
                    " neighbors, got " + std::to_string(neighbors.size()));
  }
  require_finite(apex, "apex");
  Eigen::MatrixXd rel(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& nb = neighbors[static_cast<std::size_t>(i)];
    if (nb.size() != d) throw Error(ErrorCode::DimensionMismatch, "neighbor dimension differs from apex");
    require_finite(nb, "neighbor");
    rel.row(i) = (nb - apex).transpose();
  }
  // Distinctness is judged on the contracted points, which are what the fit sees.
  for (Eigen::Index i = 0; i < d; ++i) {
    if (epsilon * rel.row(i).norm() < kCoincidenceTolerance) {
      throw Error(ErrorCode::CoincidentPoints,
                  "contracted neighbor " + std::to_string(i) + " coincides with the apex");
    }
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (epsilon * (rel.row(i) - rel.row(j)).norm() < kCoincidenceTolerance) {
        throw Error(ErrorCode::CoincidentPoints,
                    "contracted neighbors " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  const std::vector<Vector> contracted = contract_neighbors(apex, neighbors, epsilon);
  SphereFit fit = finish(fit_through_origin(rel), apex, epsilon, contracted);
  fit.diagnostics.residual_max = std::max(fit.diagnostics.residual_max, std::abs(sphere_residual(fit.sphere, apex)));
  return fit;
}

double curvature(const GeneralizedSphere& sphere) {
  return sphere.is_flat() ? 0.0 : 1.0 / sphere.radius;
}

double sphere_residual(const GeneralizedSphere& sphere, const Vector& point) {
  if (point.size() != sphere.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension " + std::to_string(point.size()) +
                                                  " differs from sphere dimension " + std::to_string(sphere.dim()));
  }
  if (sphere.is_flat()) return sphere.normal.dot(point) - sphere.offset;
  return (point - sphere.center).norm() - sphere.radius;
}

double normalized_radius(const SphereFit& fit) {
  if (fit.sphere.is_flat()) return std::numeric_limits<double>::infinity();
  return fit.sphere.radius / fit.diagnostics.epsilon_used;
}

SphereEquation sphere_equation(const GeneralizedSphere& sphere) {
  if (sphere.is_flat()) {
    throw Error(ErrorCode::InvalidInput, "a flat sphere has no monic equation");
  }
  SphereEquation eq;
  eq.linear = -2.0 * sphere.center;
  eq.constant = sphere.center.squaredNorm() - sphere.radius * sphere.radius;
  return eq;
}

GeneralizedSphere sphere_from_equation(const SphereEquation& equation, const Vector& apex_hint) {
  if (apex_hint.size() != equation.linear.size()) {
    throw Error(ErrorCode::DimensionMismatch, "apex hint dimension differs from equation");
  }
  const Vector center = -0.5 * equation.linear;
  const double r2 = center.squaredNorm() - equation.constant;
  if (!(r2 > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "equation describes an empty or degenerate sphere");
  }
  const double r = std::sqrt(r2);
  Vector dir = apex_hint - center;
  if (dir.norm() == 0.0) {
    dir = Vector::Zero(center.size());
    dir(0) = 1.0;
  }
  return GeneralizedSphere::round(center, r, center + r * dir.normalized());
}

}  // namespace oscul
