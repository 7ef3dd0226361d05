#pragma once

#include <Eigen/Core>

namespace oscul::predicates {

using P2 = Eigen::Vector2d;
using P3 = Eigen::Vector3d;

/// Twice the signed area of (a, b, c); positive for counter-clockwise.
double orient2d(const P2& a, const P2& b, const P2& c);

/// True when the closed segments [a, b] and [c, d] share at least one point,
/// including touching and collinear overlap.
bool segments_intersect(const P2& a, const P2& b, const P2& c, const P2& d);

double point_segment_distance(const P3& p, const P3& a, const P3& b);
double point_triangle_distance(const P3& p, const P3& a, const P3& b, const P3& c);

/// Closed triangle-triangle intersection. `tol` is an absolute distance below
/// which a vertex counts as lying in the other triangle's plane.
bool triangles_intersect(const P3& a0, const P3& a1, const P3& a2, const P3& b0, const P3& b1,
                         const P3& b2, double tol);

/// Closed segment-triangle intersection with the same plane tolerance.
bool segment_triangle_intersect(const P3& p, const P3& q, const P3& a, const P3& b, const P3& c,
                                double tol);

}  // namespace oscul::predicates
