#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "oscul/geometry.hpp"
#include "oscul/mesh.hpp"
#include "oscul/neighborhood.hpp"

namespace oscul {

/// The (d-2)-sphere {x on the sphere : ||x - apex|| = delta}: center, radius
/// and an orthonormal basis of the hyperplane it spans.
struct Rim {
  Vector center;
  double radius = 0.0;
  Vector axis;            // unit normal of the sphere at the apex
  Eigen::MatrixXd basis;  // d x (d-1), columns orthogonal to axis

  Vector point(const Vector& direction) const { return center + radius * direction; }
  /// Unit direction in the rim hyperplane whose rim point is nearest to target.
  Vector direction_toward(const Vector& target) const;
};

/// The part of an osculating sphere within ambient distance delta of its apex.
struct HyperCap {
  GeneralizedSphere sphere;
  Vector apex;
  double delta = 0.0;
  Rim rim;

  Vector nearest_rim_point(const Vector& target) const { return rim.point(rim.direction_toward(target)); }
};

/// Throws DeltaTooLarge if delta > fit_epsilon or delta >= 2 radius, and
/// ApexNotOnSphere if the apex is off the surface.
HyperCap cut_cap(const GeneralizedSphere& sphere, const Vector& apex, double delta, double fit_epsilon = 1.0);

/// The two rim points of a planar cap.
std::array<Vector, 2> rim_points_2d(const HyperCap& cap);

/// Intersection of a round planar sphere with the line x[axis] = level
/// (axis is 0-based), smaller free coordinate first. Throws NoIntersection.
std::vector<Vector> hyperplane_cut_point(const GeneralizedSphere& sphere, std::size_t axis, double level);

struct CylinderSegment {
  std::size_t cap_i = 0;
  std::size_t cap_j = 0;
  Vector direction_i;  // rim direction of the attachment on cap_i
  Vector direction_j;
  Vector rim_point_i;
  Vector rim_point_j;
};

/// Attaches at the rim point of each cap nearest to the other cap's apex.
/// Throws CapsOverlap when the apexes are within delta_i + delta_j.
CylinderSegment connect_cylinder(const HyperCap& cap_i, const HyperCap& cap_j, std::size_t i, std::size_t j);

/// Coefficients (a1, a2) of the line x2 = a1 x1 + a2 through a planar
/// segment, from the 2x2 system through its endpoints.
std::array<double, 2> line_coefficients(const CylinderSegment& cylinder);

/// Cylinders for every edge of the plan, with attachments on a shared cap
/// kept apart: planar caps give their two rim points to the two neighbors
/// by least total distance, higher-dimensional ones keep attachment
/// directions at least kMinAttachmentAngle apart.
std::vector<CylinderSegment> connect_path(const std::vector<HyperCap>& caps, const ConnectionPlan& plan);

inline constexpr double kMinAttachmentAngle = 0.2617993877991494;  // pi / 12

enum class StripKind { ClosingLoop, ToInfinity };

struct HyperStrip {
  StripKind kind = StripKind::ClosingLoop;
  std::vector<std::size_t> caps;              // attached caps (2 for a loop, 1 otherwise)
  std::vector<Vector> attach_directions;      // rim directions of the attachments
  std::vector<Vector> route;                  // centerline from the first attachment outward
  double truncation = 0.0;                    // rendered ray length, ToInfinity only
  bool reversed_end = false;                  // loop strip: far cross-section traversed backwards
};

struct AssemblyOptions {
  std::size_t cap_samples = 32;     // segments per cap arc (d = 2) or rim samples (d = 3)
  std::size_t cylinder_rings = 16;  // cross-sections per cylinder (d = 3)
  std::optional<double> strip_length;  // ToInfinity truncation; default 10 R
};

/// Bounding ball used for strip detours: centroid and max distance to it.
struct BoundingBall {
  Vector center;
  double radius = 0.0;
};

BoundingBall bounding_ball(const std::vector<HyperCap>& caps);

/// Strips closing the path: one loop strip detouring at 1.5 R, or two rays of
/// length L along the plan's infinity direction. Routes are validated against
/// the meshed caps and cylinders when d <= 3; RoutingFailed if none is clean.
std::vector<HyperStrip> closing_strip(const ConnectionPlan& plan, const std::vector<HyperCap>& caps,
                                      const std::vector<CylinderSegment>& cylinders,
                                      const AssemblyOptions& options = {});

/// W: caps, cylinders and strips, plus a mesh when d <= 3.
struct Hypersurface {
  std::size_t dim = 0;
  Closure closure = Closure::Loop;
  ConnectionPlan plan;
  std::vector<HyperCap> caps;  // indexed like the cloud
  std::vector<CylinderSegment> cylinders;  // in path order
  std::vector<HyperStrip> strips;
  BoundingBall ball;
  AssemblyOptions options;
  std::optional<Mesh> mesh;

  std::size_t component_count() const { return caps.size() + cylinders.size() + strips.size(); }
};

/// Throws ComponentMismatch when the counts disagree with the plan.
Hypersurface assemble(std::vector<HyperCap> caps, std::vector<CylinderSegment> cylinders,
                      std::vector<HyperStrip> strips, const ConnectionPlan& plan,
                      const AssemblyOptions& options = {});

/// Mesh length from the apex to the attachment at `direction`: the sampled
/// arc for planar caps, delta otherwise.
double along_cap_length(const HyperCap& cap, const Vector& direction, std::size_t cap_samples);

}  // namespace oscul
