#include "oscul/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Geometry>

namespace oscul::predicates {

double orient2d(const P2& a, const P2& b, const P2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(const P2& a, const P2& b, const P2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool segments_intersect(const P2& a, const P2& b, const P2& c, const P2& d) {
  const int o1 = sign_of(orient2d(a, b, c));
  const int o2 = sign_of(orient2d(a, b, d));
  const int o3 = sign_of(orient2d(c, d, a));
  const int o4 = sign_of(orient2d(c, d, b));
  if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) {
    if (o1 != 0 || o2 != 0) return true;
  }
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double point_segment_distance(const P3& p, const P3& a, const P3& b) {
  const P3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double point_triangle_distance(const P3& p, const P3& a, const P3& b, const P3& c) {
  // Closest-point-on-triangle by Voronoi regions.
  const P3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
  const P3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();
  const P3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + v * ab + w * ac)).norm();
}

namespace {

// Drop the coordinate along which the normal is largest.
P2 project(const P3& p, int drop) {
  switch (drop) {
    case 0: return {p.y(), p.z()};
    case 1: return {p.x(), p.z()};
    default: return {p.x(), p.y()};
  }
}

bool point_in_triangle_2d(const P2& p, const P2& a, const P2& b, const P2& c) {
  const double d1 = orient2d(a, b, p), d2 = orient2d(b, c, p), d3 = orient2d(c, a, p);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

bool triangles_overlap_2d(const std::array<P2, 3>& a, const std::array<P2, 3>& b) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (segments_intersect(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3])) return true;
    }
  }
  return point_in_triangle_2d(a[0], b[0], b[1], b[2]) || point_in_triangle_2d(b[0], a[0], a[1], a[2]);
}

bool segment_triangle_overlap_2d(const P2& p, const P2& q, const std::array<P2, 3>& t) {
  for (int j = 0; j < 3; ++j) {
    if (segments_intersect(p, q, t[j], t[(j + 1) % 3])) return true;
  }
  return point_in_triangle_2d(p, t[0], t[1], t[2]);
}

int dominant_axis(const P3& n) {
  const P3 m = n.cwiseAbs();
  if (m.x() >= m.y() && m.x() >= m.z()) return 0;
  return m.y() >= m.z() ? 1 : 2;
}

}  // namespace

bool segment_triangle_intersect(const P3& p, const P3& q, const P3& a, const P3& b, const P3& c,
                                double tol) {
  P3 n = (b - a).cross(c - a);
  const double nn = n.norm();
  if (nn == 0.0) return false;
  n /= nn;
  const double dp = n.dot(p - a);
  const double dq = n.dot(q - a);
  if ((dp > tol && dq > tol) || (dp < -tol && dq < -tol)) return false;
  const int drop = dominant_axis(n);
  const std::array<P2, 3> t{project(a, drop), project(b, drop), project(c, drop)};
  if (std::abs(dp) <= tol && std::abs(dq) <= tol) {
    return segment_triangle_overlap_2d(project(p, drop), project(q, drop), t);
  }
  P3 x;
  if (std::abs(dp) <= tol) {
    x = p;
  } else if (std::abs(dq) <= tol) {
    x = q;
  } else {
    x = p + (dp / (dp - dq)) * (q - p);
  }
  return point_in_triangle_2d(project(x, drop), t[0], t[1], t[2]);
}

bool triangles_intersect(const P3& a0, const P3& a1, const P3& a2, const P3& b0, const P3& b1,
                         const P3& b2, double tol) {
  const P3 nb = (b1 - b0).cross(b2 - b0);
  const P3 na = (a1 - a0).cross(a2 - a0);
  const double nbn = nb.norm(), nan_ = na.norm();
  if (nbn == 0.0 || nan_ == 0.0) return false;
  const P3 ub = nb / nbn, ua = na / nan_;

  const std::array<double, 3> da{ub.dot(a0 - b0), ub.dot(a1 - b0), ub.dot(a2 - b0)};
  if ((da[0] > tol && da[1] > tol && da[2] > tol) || (da[0] < -tol && da[1] < -tol && da[2] < -tol)) {
    return false;
  }
  const std::array<double, 3> db{ua.dot(b0 - a0), ua.dot(b1 - a0), ua.dot(b2 - a0)};
  if ((db[0] > tol && db[1] > tol && db[2] > tol) || (db[0] < -tol && db[1] < -tol && db[2] < -tol)) {
    return false;
  }
  const bool coplanar = std::abs(da[0]) <= tol && std::abs(da[1]) <= tol && std::abs(da[2]) <= tol;
  if (coplanar) {
    const int drop = dominant_axis(ub);
    return triangles_overlap_2d({project(a0, drop), project(a1, drop), project(a2, drop)},
                                {project(b0, drop), project(b1, drop), project(b2, drop)});
  }
  // Non-coplanar triangles meet iff an edge of one crosses the other.
  const std::array<P3, 3> a{a0, a1, a2};
  const std::array<P3, 3> b{b0, b1, b2};
  for (int i = 0; i < 3; ++i) {
    if (segment_triangle_intersect(a[i], a[(i + 1) % 3], b0, b1, b2, tol)) return true;
    if (segment_triangle_intersect(b[i], b[(i + 1) % 3], a0, a1, a2, tol)) return true;
  }
  return false;
}

}  // namespace oscul::predicates
