#include "oscul/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/QR>

#include "oscul/error.hpp"
#include "oscul/verification.hpp"

namespace oscul {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxArcHalfWidth = kPi / 8.0;  // angular half-width of a 3D attachment arc
constexpr double kDetourFactor = 1.5;
constexpr double kDefaultStripFactor = 10.0;

using V3 = Eigen::Vector3d;

// Orthonormal basis of the complement of the unit vector n.
Eigen::MatrixXd complement_basis(const Vector& n) {
  const Eigen::Index d = n.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(n)};
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  return q.rightCols(d - 1);
}

V3 to3(const Vector& v) {
  V3 out = V3::Zero();
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(3, v.size()); ++i) out(i) = v(i);
  return out;
}

// Minimal rotation taking unit a to unit b, applied to x.
V3 rotate_between(const V3& a, const V3& b, const V3& x) {
  const V3 axis = a.cross(b);
  const double s = axis.norm();
  const double c = a.dot(b);
  if (s < 1e-15) {
    if (c > 0.0) return x;
    // Antiparallel: half turn about any perpendicular axis.
    V3 perp = a.unitOrthogonal();
    return Eigen::AngleAxisd(kPi, perp) * x;
  }
  return Eigen::AngleAxisd(std::atan2(s, c), axis / s) * x;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

double angular_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, 2.0 * kPi - d);
}

// Points from the apex (index 0) to the rim point at `direction` (index m),
// both exact, along the cap's great arc (or straight for flat caps).
std::vector<Vector> half_arc(const HyperCap& cap, const Vector& direction, std::size_t m) {
  std::vector<Vector> pts(m + 1);
  pts.front() = cap.apex;
  pts.back() = cap.rim.point(direction);
  if (cap.sphere.is_flat()) {
    for (std::size_t k = 1; k < m; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m);
      pts[k] = (1.0 - t) * cap.apex + t * pts.back();
    }
    return pts;
  }
  const Vector& c = cap.sphere.center;
  const double r = cap.sphere.radius;
  const Vector p = (cap.apex - c) / r;
  const Vector q = (pts.back() - c) / r;
  const double theta = std::acos(std::clamp(p.dot(q), -1.0, 1.0));
  Vector e = q - p.dot(q) * p;
  e.normalize();
  for (std::size_t k = 1; k < m; ++k) {
    const double phi = theta * static_cast<double>(k) / static_cast<double>(m);
    pts[k] = c + r * (std::cos(phi) * p + std::sin(phi) * e);
  }
  return pts;
}

std::size_t half_samples(std::size_t cap_samples) { return std::max<std::size_t>(1, (cap_samples + 1) / 2); }

// Pushes two attachment directions apart to at least kMinAttachmentAngle.
void spread(Vector& w1, Vector& w2, const Eigen::MatrixXd& basis) {
  const double angle = std::acos(std::clamp(w1.dot(w2), -1.0, 1.0));
  if (angle >= kMinAttachmentAngle) return;
  Vector b = w1 + w2;
  b.normalize();
  Vector e = w1 - w1.dot(b) * b;
  if (e.norm() < 1e-12) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      e = basis.col(c) - basis.col(c).dot(b) * b;
      if (e.norm() > 1e-6) break;
    }
  }
  e.normalize();
  const double half = 0.5 * kMinAttachmentAngle;
  w1 = std::cos(half) * b + std::sin(half) * e;
  w2 = std::cos(half) * b - std::sin(half) * e;
}

// ---------------------------------------------------------------------------
// Mesh construction

class MeshBuilder {
 public:
  MeshBuilder(const std::vector<HyperCap>& caps, const std::vector<CylinderSegment>& cylinders,
              const std::vector<HyperStrip>& strips, const ConnectionPlan& plan, const AssemblyOptions& options)
      : caps_(caps), cylinders_(cylinders), strips_(strips), plan_(plan), options_(options) {
    mesh_.dim = static_cast<int>(caps.front().apex.size());
  }

  Mesh build() {
    if (mesh_.dim == 2) {
      build_polyline();
    } else {
      build_surface();
    }
    return std::move(mesh_);
  }

 private:
  std::size_t add_vertex(const Vector& p) {
    mesh_.vertices.push_back(to3(p));
    return mesh_.vertices.size() - 1;
  }

  void begin_component(ComponentKind kind, std::string label) {
    MeshComponent c;
    c.kind = kind;
    c.label = std::move(label);
    c.first_element = mesh_.element_count();
    mesh_.components.push_back(std::move(c));
  }

  void add_segment(std::size_t a, std::size_t b) {
    mesh_.segments.push_back({a, b});
    mesh_.element_component.push_back(mesh_.components.size() - 1);
    ++mesh_.components.back().element_count;
  }

  void add_triangle(std::size_t a, std::size_t b, std::size_t c) {
    mesh_.triangles.push_back({a, b, c});
    mesh_.element_component.push_back(mesh_.components.size() - 1);
    ++mesh_.components.back().element_count;
  }

  static std::string cap_label(std::size_t i) { return "cap_" + std::to_string(i); }
  static std::string cyl_label(const CylinderSegment& c) {
    return "cyl_" + std::to_string(c.cap_i) + "_" + std::to_string(c.cap_j);
  }
  static std::string strip_label(std::size_t k) { return "strip_" + std::to_string(k); }

  // Planar W is one curve: [strip] cap cyl cap ... cap [strip].
  void build_polyline() {
    const std::size_t n = plan_.order.size();
    const std::size_t m = half_samples(options_.cap_samples);
    const bool loop = plan_.closure == Closure::Loop;

    // While strips are being routed some may be missing; the free side of a
    // boundary cap is then the rim point opposite its cylinder.
    auto strip_dir = [&](std::size_t cap) -> Vector {
      for (const auto& s : strips_) {
        for (std::size_t k = 0; k < s.caps.size(); ++k) {
          if (s.caps[k] == cap) return s.attach_directions[k];
        }
      }
      for (const auto& c : cylinders_) {
        if (c.cap_i == cap) return -c.direction_i;
        if (c.cap_j == cap) return -c.direction_j;
      }
      throw Error(ErrorCode::ComponentMismatch, "boundary cap " + std::to_string(cap) + " has no attachment");
    };

    std::size_t prev_out = 0;
    std::size_t first_in = 0;
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t ci = plan_.order[p];
      const HyperCap& cap = caps_[ci];
      const Vector in_dir = p == 0 ? strip_dir(ci) : cylinders_[p - 1].direction_j;
      const Vector out_dir = p + 1 == n ? strip_dir(ci) : cylinders_[p].direction_i;
      const auto in_arc = half_arc(cap, in_dir, m);
      const auto out_arc = half_arc(cap, out_dir, m);

      std::vector<std::size_t> ids;
      ids.reserve(2 * m + 1);
      for (std::size_t k = m + 1; k-- > 0;) ids.push_back(add_vertex(in_arc[k]));
      for (std::size_t k = 1; k <= m; ++k) ids.push_back(add_vertex(out_arc[k]));

      if (p == 0 && !loop && !strips_.empty()) emit_infinity_strip_2d(0, ids.front(), true);
      if (p == 0) first_in = ids.front();
      if (p > 0) {
        begin_component(ComponentKind::Cylinder, cyl_label(cylinders_[p - 1]));
        add_segment(prev_out, ids.front());
      }
      begin_component(ComponentKind::Cap, cap_label(ci));
      for (std::size_t k = 0; k + 1 < ids.size(); ++k) add_segment(ids[k], ids[k + 1]);
      prev_out = ids.back();
    }
    if (loop && !strips_.empty()) {
      // The loop strip runs from cap a to cap b; walk it backwards to close.
      const HyperStrip& s = strips_.front();
      begin_component(ComponentKind::Strip, strip_label(0));
      std::size_t cur = prev_out;
      for (std::size_t k = s.route.size() - 1; k-- > 1;) {
        const std::size_t v = add_vertex(s.route[k]);
        add_segment(cur, v);
        cur = v;
      }
      add_segment(cur, first_in);
    } else if (!loop && strips_.size() > 1) {
      emit_infinity_strip_2d(1, prev_out, false);
    }
  }

  void emit_infinity_strip_2d(std::size_t k, std::size_t rim_vertex, bool inward) {
    const HyperStrip& s = strips_.at(k);
    begin_component(ComponentKind::Strip, strip_label(k));
    if (inward) {
      // Far end first so the curve reads strip -> cap.
      std::vector<std::size_t> ids;
      for (std::size_t i = s.route.size(); i-- > 1;) ids.push_back(add_vertex(s.route[i]));
      ids.push_back(rim_vertex);
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) add_segment(ids[i], ids[i + 1]);
    } else {
      std::size_t cur = rim_vertex;
      for (std::size_t i = 1; i < s.route.size(); ++i) {
        const std::size_t v = add_vertex(s.route[i]);
        add_segment(cur, v);
        cur = v;
      }
    }
  }

  // --- spatial case --------------------------------------------------------

  struct Attachment {
    Vector direction;
    std::array<std::size_t, 5> arc{};
  };

  // Attachments on every cap, keyed by (cap, attachment slot).
  std::vector<std::vector<Attachment>> attachments_;

  std::size_t register_attachment(std::size_t cap, const Vector& direction) {
    attachments_[cap].push_back({direction, {}});
    return attachments_[cap].size() - 1;
  }

  void build_surface() {
    attachments_.assign(caps_.size(), {});
    std::vector<std::array<std::size_t, 2>> cyl_slots;
    for (const auto& c : cylinders_) {
      cyl_slots.push_back({register_attachment(c.cap_i, c.direction_i), register_attachment(c.cap_j, c.direction_j)});
    }
    std::vector<std::vector<std::size_t>> strip_slots;
    for (const auto& s : strips_) {
      std::vector<std::size_t> slots;
      for (std::size_t k = 0; k < s.caps.size(); ++k) slots.push_back(register_attachment(s.caps[k], s.attach_directions[k]));
      strip_slots.push_back(std::move(slots));
    }

    for (std::size_t ci : plan_.order) emit_cap_3d(ci);
    for (std::size_t k = 0; k < cylinders_.size(); ++k) emit_cylinder_3d(cylinders_[k], cyl_slots[k]);
    for (std::size_t k = 0; k < strips_.size(); ++k) emit_strip_3d(k, strip_slots[k]);
  }

  void emit_cap_3d(std::size_t ci) {
    const HyperCap& cap = caps_[ci];
    const Vector e1 = cap.rim.basis.col(0);
    const Vector e2 = cap.rim.basis.col(1);
    auto ring_point = [&](double psi) -> Vector {
      return cap.rim.center + cap.rim.radius * (std::cos(psi) * e1 + std::sin(psi) * e2);
    };

    struct RingEntry {
      double angle;
      std::size_t vertex;
    };
    std::vector<RingEntry> ring;
    const std::size_t apex = add_vertex(cap.apex);
    std::vector<double> centers;
    for (const auto& att : attachments_[ci]) centers.push_back(std::atan2(att.direction.dot(e2), att.direction.dot(e1)));
    double half_width = kMaxArcHalfWidth;
    for (std::size_t a = 0; a < centers.size(); ++a) {
      for (std::size_t b = a + 1; b < centers.size(); ++b) {
        half_width = std::min(half_width, 0.4 * angular_distance(centers[a], centers[b]));
      }
    }
    for (std::size_t slot = 0; slot < attachments_[ci].size(); ++slot) {
      auto& att = attachments_[ci][slot];
      const double psi = centers[slot];
      const std::array<double, 5> offs{-1.0, -0.5, 0.0, 0.5, 1.0};
      for (std::size_t k = 0; k < 5; ++k) {
        const double a = psi + offs[k] * half_width;
        att.arc[k] = add_vertex(k == 2 ? cap.rim.point(att.direction) : ring_point(a));
        ring.push_back({wrap_angle(a), att.arc[k]});
      }
    }
    const std::size_t samples = std::max<std::size_t>(8, options_.cap_samples);
    const double step = 2.0 * kPi / static_cast<double>(samples);
    for (std::size_t k = 0; k < samples; ++k) {
      const double a = step * static_cast<double>(k);
      const bool near_arc = std::any_of(centers.begin(), centers.end(), [&](double c) {
        return angular_distance(a, c) < half_width + 0.5 * step;
      });
      if (!near_arc) ring.push_back({a, add_vertex(ring_point(a))});
    }
    std::sort(ring.begin(), ring.end(), [](const RingEntry& a, const RingEntry& b) { return a.angle < b.angle; });

    begin_component(ComponentKind::Cap, cap_label(ci));
    for (std::size_t k = 0; k < ring.size(); ++k) {
      add_triangle(apex, ring[k].vertex, ring[(k + 1) % ring.size()].vertex);
    }
  }

  void emit_band(const std::vector<std::array<std::size_t, 5>>& rows) {
    for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
      for (std::size_t k = 0; k + 1 < 5; ++k) {
        add_triangle(rows[r][k], rows[r][k + 1], rows[r + 1][k + 1]);
        add_triangle(rows[r][k], rows[r + 1][k + 1], rows[r + 1][k]);
      }
    }
  }

  void emit_cylinder_3d(const CylinderSegment& c, const std::array<std::size_t, 2>& slots) {
    const auto& a = attachments_[c.cap_i][slots[0]].arc;
    auto b = attachments_[c.cap_j][slots[1]].arc;
    auto ruling = [&](const std::array<std::size_t, 5>& other) {
      double total = 0.0;
      for (std::size_t k = 0; k < 5; ++k) total += (mesh_.vertices[a[k]] - mesh_.vertices[other[k]]).norm();
      return total;
    };
    auto rb = b;
    std::reverse(rb.begin(), rb.end());
    if (ruling(rb) < ruling(b)) b = rb;

    const std::size_t rings = std::max<std::size_t>(2, options_.cylinder_rings);
    std::vector<std::array<std::size_t, 5>> rows{a};
    for (std::size_t r = 1; r + 1 < rings; ++r) {
      const double t = static_cast<double>(r) / static_cast<double>(rings - 1);
      std::array<std::size_t, 5> row{};
      for (std::size_t k = 0; k < 5; ++k) {
        mesh_.vertices.push_back((1.0 - t) * mesh_.vertices[a[k]] + t * mesh_.vertices[b[k]]);
        row[k] = mesh_.vertices.size() - 1;
      }
      rows.push_back(row);
    }
    rows.push_back(b);
    begin_component(ComponentKind::Cylinder, cyl_label(c));
    emit_band(rows);
  }

  // Sweeps the attachment arc along the route with a rotation-minimizing
  // frame; a loop strip spreads the twist needed to land on the far arc.
  void emit_strip_3d(std::size_t k, const std::vector<std::size_t>& slots) {
    const HyperStrip& s = strips_[k];
    const std::size_t nr = s.route.size();
    std::vector<V3> route;
    for (const auto& p : s.route) route.push_back(to3(p));

    std::vector<V3> tangent(nr);
    for (std::size_t i = 0; i < nr; ++i) {
      const V3 back = i > 0 ? V3((route[i] - route[i - 1]).normalized()) : V3::Zero();
      const V3 fwd = i + 1 < nr ? V3((route[i + 1] - route[i]).normalized()) : V3::Zero();
      V3 t = back + fwd;
      if (t.norm() < 1e-12) t = i + 1 < nr ? fwd : back;
      tangent[i] = t.normalized();
    }
    std::vector<double> arclen(nr, 0.0);
    for (std::size_t i = 1; i < nr; ++i) arclen[i] = arclen[i - 1] + (route[i] - route[i - 1]).norm();

    const auto& arc_a = attachments_[s.caps[0]][slots[0]].arc;
    std::vector<std::array<V3, 5>> offsets(nr);
    for (std::size_t m = 0; m < 5; ++m) offsets[0][m] = mesh_.vertices[arc_a[m]] - route[0];
    for (std::size_t i = 1; i < nr; ++i) {
      for (std::size_t m = 0; m < 5; ++m) offsets[i][m] = rotate_between(tangent[i - 1], tangent[i], offsets[i - 1][m]);
    }

    std::vector<std::array<std::size_t, 5>> rows{arc_a};
    const bool closed = s.kind == StripKind::ClosingLoop;
    std::array<std::size_t, 5> arc_b{};
    double twist = 0.0;
    std::array<V3, 5> residual{};
    if (closed) {
      arc_b = attachments_[s.caps[1]][slots[1]].arc;
      if (s.reversed_end) std::reverse(arc_b.begin(), arc_b.end());
      const V3& tn = tangent[nr - 1];
      std::array<V3, 5> target{};
      for (std::size_t m = 0; m < 5; ++m) target[m] = mesh_.vertices[arc_b[m]] - route[nr - 1];
      V3 wa = offsets[nr - 1][4] - offsets[nr - 1][0];
      V3 wb = target[4] - target[0];
      wa -= wa.dot(tn) * tn;
      wb -= wb.dot(tn) * tn;
      twist = std::atan2(tn.dot(wa.cross(wb)), wa.dot(wb));
      const Eigen::AngleAxisd turn(twist, tn);
      for (std::size_t m = 0; m < 5; ++m) residual[m] = target[m] - turn * offsets[nr - 1][m];
    }
    const double total = arclen[nr - 1] > 0.0 ? arclen[nr - 1] : 1.0;
    const std::size_t last_free = closed ? nr - 1 : nr;
    for (std::size_t i = 1; i < last_free; ++i) {
      const double t = arclen[i] / total;
      const Eigen::AngleAxisd turn(t * twist, tangent[i]);
      std::array<std::size_t, 5> row{};
      for (std::size_t m = 0; m < 5; ++m) {
        V3 off = offsets[i][m];
        if (closed) off = turn * off + t * residual[m];
        mesh_.vertices.push_back(route[i] + off);
        row[m] = mesh_.vertices.size() - 1;
      }
      rows.push_back(row);
    }
    if (closed) rows.push_back(arc_b);
    begin_component(ComponentKind::Strip, strip_label(k));
    emit_band(rows);
  }

  const std::vector<HyperCap>& caps_;
  const std::vector<CylinderSegment>& cylinders_;
  const std::vector<HyperStrip>& strips_;
  const ConnectionPlan& plan_;
  const AssemblyOptions& options_;
  Mesh mesh_;
};

Mesh build_mesh(const std::vector<HyperCap>& caps, const std::vector<CylinderSegment>& cylinders,
                const std::vector<HyperStrip>& strips, const ConnectionPlan& plan, const AssemblyOptions& options) {
  Mesh mesh = MeshBuilder(caps, cylinders, strips, plan, options).build();
  if (mesh.dim == 3) orient_consistently(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// Strip routing

// Point where the ray from `from` along unit u leaves the ball (center, radius).
Vector exit_point(const Vector& from, const Vector& u, const Vector& center, double radius) {
  const Vector rel = from - center;
  const double b = u.dot(rel);
  const double c = rel.squaredNorm() - radius * radius;
  const double t = -b + std::sqrt(std::max(0.0, b * b - c));
  return from + t * u;
}

// Arc on the sphere (center, radius) from p to q, endpoints included.
std::vector<Vector> sphere_arc(const Vector& center, double radius, const Vector& p, const Vector& q, bool long_way) {
  const Vector a = (p - center).normalized();
  const Vector b = (q - center).normalized();
  double theta = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  Vector e = b - a.dot(b) * a;
  if (e.norm() < 1e-12) {
    e = complement_basis(a).col(0);
  } else {
    e.normalize();
  }
  if (long_way) {
    theta = 2.0 * kPi - theta;
    e = -e;
  }
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(theta / (kPi / 32.0))));
  std::vector<Vector> pts;
  pts.push_back(p);
  for (std::size_t k = 1; k < steps; ++k) {
    const double phi = theta * static_cast<double>(k) / static_cast<double>(steps);
    pts.push_back(center + radius * (std::cos(phi) * a + std::sin(phi) * e));
  }
  if (theta > 1e-12) pts.push_back(q);
  return pts;
}

void append_dedup(std::vector<Vector>& route, const Vector& p) {
  if (route.empty() || (route.back() - p).norm() > 1e-12) route.push_back(p);
}

// Leg directions to try from a boundary cap, best guess first.
std::vector<Vector> leg_candidates(const HyperCap& cap, const Vector& free_dir, const BoundingBall& ball) {
  const Eigen::Index d = cap.apex.size();
  Vector radial = cap.apex - ball.center;
  if (radial.norm() < 1e-12 * std::max(1.0, ball.radius)) radial = free_dir;
  radial.normalize();
  std::vector<Vector> out{radial};
  if (d == 2) {
    for (int k = 1; k < 12; ++k) {
      const double a = kPi / 6.0 * k;
      Vector r(2);
      r << std::cos(a) * radial(0) - std::sin(a) * radial(1), std::sin(a) * radial(0) + std::cos(a) * radial(1);
      out.push_back(r);
    }
  } else if (d == 3) {
    const V3 n = to3(cap.rim.axis);
    const V3 u = to3(radial);
    const V3 f = to3(free_dir);
    const std::vector<V3> extra{f, (u + f).normalized(), -n, n, (u + n).normalized(), (u - n).normalized(),
                                n.cross(u).normalized(), -n.cross(u).normalized()};
    for (const auto& v : extra) {
      if (!v.allFinite() || v.norm() < 0.5) continue;
      Vector w(3);
      w << v(0), v(1), v(2);
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Vector Rim::direction_toward(const Vector& target) const {
  const Vector v = target - center;
  if (basis.cols() == 1) {
    const Vector t = basis.col(0);
    return v.dot(t) >= 0.0 ? t : Vector(-t);
  }
  Vector w = basis * (basis.transpose() * v);
  if (w.norm() < 1e-300) return basis.col(0);
  return w.normalized();
}

HyperCap cut_cap(const GeneralizedSphere& sphere, const Vector& apex, double delta, double fit_epsilon) {
  if (apex.size() != sphere.dim()) throw Error(ErrorCode::DimensionMismatch, "apex dimension differs from sphere");
  if (apex.size() < 2) throw Error(ErrorCode::DimensionMismatch, "caps need d >= 2");
  if (!(delta > 0.0)) throw Error(ErrorCode::DeltaTooLarge, "delta must be positive");
  if (delta > fit_epsilon) {
    throw Error(ErrorCode::DeltaTooLarge,
                "delta " + std::to_string(delta) + " exceeds the fit epsilon " + std::to_string(fit_epsilon));
  }
  const double residual = std::abs(sphere_residual(sphere, apex));
  const double scale = sphere.is_flat() ? std::max(1.0, apex.cwiseAbs().maxCoeff()) : sphere.radius;
  if (residual > 1e-9 * scale) {
    throw Error(ErrorCode::ApexNotOnSphere, "apex is " + std::to_string(residual) + " off the sphere");
  }
  HyperCap cap;
  cap.sphere = sphere;
  cap.apex = apex;
  cap.delta = delta;
  if (sphere.is_flat()) {
    cap.rim.axis = sphere.normal;
    cap.rim.center = apex;
    cap.rim.radius = delta;
  } else {
    if (delta >= 2.0 * sphere.radius) {
      throw Error(ErrorCode::DeltaTooLarge, "delta " + std::to_string(delta) + " is not below the sphere diameter " +
                                                std::to_string(2.0 * sphere.radius));
    }
    const double h = delta * delta / (2.0 * sphere.radius);
    cap.rim.axis = (sphere.center - apex).normalized();
    cap.rim.center = apex + h * cap.rim.axis;
    cap.rim.radius = std::sqrt(delta * delta - h * h);
  }
  cap.rim.basis = complement_basis(cap.rim.axis);
  return cap;
}

std::array<Vector, 2> rim_points_2d(const HyperCap& cap) {
  if (cap.apex.size() != 2) throw Error(ErrorCode::DimensionMismatch, "rim points are listed for planar caps only");
  const Vector t = cap.rim.basis.col(0);
  Vector a = cap.rim.point(t);
  Vector b = cap.rim.point(-t);
  if (std::lexicographical_compare(b.data(), b.data() + 2, a.data(), a.data() + 2)) std::swap(a, b);
  return {a, b};
}

std::vector<Vector> hyperplane_cut_point(const GeneralizedSphere& sphere, std::size_t axis, double level) {
  if (sphere.is_flat()) throw Error(ErrorCode::InvalidInput, "hyperplane cut needs a round sphere");
  if (sphere.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "hyperplane cut is defined in the plane");
  if (axis > 1) throw Error(ErrorCode::InvalidInput, "axis must be 0 or 1");
  const auto ax = static_cast<Eigen::Index>(axis);
  const Eigen::Index other = 1 - ax;
  const double dz = level - sphere.center(ax);
  const double disc = sphere.radius * sphere.radius - dz * dz;
  if (disc < 0.0) {
    throw Error(ErrorCode::NoIntersection, "the line misses the sphere by " + std::to_string(std::sqrt(-disc)));
  }
  const double root = std::sqrt(disc);
  std::vector<Vector> out(2, Vector(2));
  out[0](ax) = level;
  out[1](ax) = level;
  out[0](other) = sphere.center(other) - root;
  out[1](other) = sphere.center(other) + root;
  return out;
}

CylinderSegment connect_cylinder(const HyperCap& cap_i, const HyperCap& cap_j, std::size_t i, std::size_t j) {
  const double gap = (cap_i.apex - cap_j.apex).norm();
  if (gap <= cap_i.delta + cap_j.delta) {
    throw Error(ErrorCode::CapsOverlap, "caps " + std::to_string(i) + " and " + std::to_string(j) +
                                            " have apexes " + std::to_string(gap) + " apart");
  }
  CylinderSegment c;
  c.cap_i = i;
  c.cap_j = j;
  c.direction_i = cap_i.rim.direction_toward(cap_j.apex);
  c.direction_j = cap_j.rim.direction_toward(cap_i.apex);
  c.rim_point_i = cap_i.rim.point(c.direction_i);
  c.rim_point_j = cap_j.rim.point(c.direction_j);
  return c;
}

std::array<double, 2> line_coefficients(const CylinderSegment& cylinder) {
  const Vector& p = cylinder.rim_point_i;
  const Vector& q = cylinder.rim_point_j;
  if (p.size() != 2) throw Error(ErrorCode::DimensionMismatch, "line coefficients need a planar segment");
  if (std::abs(p(0) - q(0)) <= 1e-15 * std::max(1.0, std::abs(p(0)))) {
    throw Error(ErrorCode::InvalidInput, "segment is vertical; x2 = a1 x1 + a2 has no solution");
  }
  Eigen::Matrix2d a;
  a << p(0), 1.0, q(0), 1.0;
  const Eigen::Vector2d rhs(p(1), q(1));
  const Eigen::Vector2d sol = a.partialPivLu().solve(rhs);
  return {sol(0), sol(1)};
}

std::vector<CylinderSegment> connect_path(const std::vector<HyperCap>& caps, const ConnectionPlan& plan) {
  const std::size_t n = plan.order.size();
  if (caps.size() != n) throw Error(ErrorCode::ComponentMismatch, "cap count differs from the plan");
  std::vector<CylinderSegment> cyl;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    cyl.push_back(connect_cylinder(caps[plan.order[p]], caps[plan.order[p + 1]], plan.order[p], plan.order[p + 1]));
  }
  for (std::size_t p = 1; p + 1 < n; ++p) {
    const HyperCap& cap = caps[plan.order[p]];
    Vector& w_prev = cyl[p - 1].direction_j;
    Vector& w_next = cyl[p].direction_i;
    if (cap.apex.size() == 2) {
      const Vector t = cap.rim.basis.col(0);
      const Vector& prev = caps[plan.order[p - 1]].apex;
      const Vector& next = caps[plan.order[p + 1]].apex;
      const double keep = (cap.rim.point(t) - prev).norm() + (cap.rim.point(-t) - next).norm();
      const double swap = (cap.rim.point(-t) - prev).norm() + (cap.rim.point(t) - next).norm();
      w_prev = keep <= swap ? t : Vector(-t);
      w_next = -w_prev;
    } else {
      spread(w_prev, w_next, cap.rim.basis);
    }
    cyl[p - 1].rim_point_j = cap.rim.point(w_prev);
    cyl[p].rim_point_i = cap.rim.point(w_next);
  }
  return cyl;
}

BoundingBall bounding_ball(const std::vector<HyperCap>& caps) {
  if (caps.empty()) throw Error(ErrorCode::InvalidInput, "no caps");
  BoundingBall b;
  b.center = Vector::Zero(caps.front().apex.size());
  for (const auto& c : caps) b.center += c.apex;
  b.center /= static_cast<double>(caps.size());
  for (const auto& c : caps) b.radius = std::max(b.radius, (c.apex - b.center).norm());
  return b;
}

namespace {

// Free rim direction of a boundary cap: opposite its single cylinder.
Vector free_direction(const HyperCap& cap, const std::vector<CylinderSegment>& cylinders, std::size_t ci,
                      const Vector& fallback_target) {
  for (const auto& c : cylinders) {
    if (c.cap_i == ci) return -c.direction_i;
    if (c.cap_j == ci) return -c.direction_j;
  }
  return cap.rim.direction_toward(fallback_target);
}

struct StripAttempt {
  std::vector<HyperStrip> strips;
  std::string failure;
};

// Builds the mesh with the candidate strips; empty failure means clean.
std::string validate(const std::vector<HyperCap>& caps, const std::vector<CylinderSegment>& cylinders,
                     std::vector<HyperStrip>& strips, const ConnectionPlan& plan, const AssemblyOptions& options,
                     std::size_t focus_strip) {
  Mesh mesh = build_mesh(caps, cylinders, strips, plan, options);
  if (mesh.dim == 3 && strips[focus_strip].kind == StripKind::ClosingLoop && !check_orientability(mesh)) {
    strips[focus_strip].reversed_end = !strips[focus_strip].reversed_end;
    mesh = build_mesh(caps, cylinders, strips, plan, options);
    if (!check_orientability(mesh)) return "no orientable way to close the loop strip";
  }
  const std::string label = "strip_" + std::to_string(focus_strip);
  std::vector<bool> focus(mesh.components.size(), false);
  for (std::size_t c = 0; c < mesh.components.size(); ++c) focus[c] = mesh.components[c].label == label;
  const auto hits = find_intersections(mesh, &focus, 1);
  if (hits.empty()) return {};
  const auto& ca = mesh.components[mesh.element_component[hits[0].first]];
  const auto& cb = mesh.components[mesh.element_component[hits[0].second]];
  return ca.label + " meets " + cb.label;
}

}  // namespace

std::vector<HyperStrip> closing_strip(const ConnectionPlan& plan, const std::vector<HyperCap>& caps,
                                      const std::vector<CylinderSegment>& cylinders, const AssemblyOptions& options) {
  if (plan.order.size() < 2 || caps.size() != plan.order.size()) {
    throw Error(ErrorCode::ComponentMismatch, "strip routing needs the full cap set of the plan");
  }
  const BoundingBall ball = bounding_ball(caps);
  const double detour = kDetourFactor * std::max(ball.radius, 1e-300);
  const std::size_t ia = plan.boundary_a;
  const std::size_t ib = plan.boundary_b;
  const HyperCap& cap_a = caps[ia];
  const HyperCap& cap_b = caps[ib];
  const Vector fa = free_direction(cap_a, cylinders, ia, ball.center);
  const Vector fb = free_direction(cap_b, cylinders, ib, ball.center);
  const Vector pa = cap_a.rim.point(fa);
  const Vector pb = cap_b.rim.point(fb);
  const std::size_t d = cap_a.apex.size();
  const bool check = d <= 3;

  const auto cand_a = leg_candidates(cap_a, fa, ball);
  const auto cand_b = leg_candidates(cap_b, fb, ball);
  std::string first_failure;

  if (plan.closure == Closure::Loop) {
    // Try candidate pairs in order of combined rank.
    for (std::size_t rank = 0; rank < cand_a.size() + cand_b.size() - 1; ++rank) {
      for (std::size_t ka = 0; ka <= rank && ka < cand_a.size(); ++ka) {
        const std::size_t kb = rank - ka;
        if (kb >= cand_b.size()) continue;
        for (bool long_way : {false, true}) {
          HyperStrip s;
          s.kind = StripKind::ClosingLoop;
          s.caps = {ia, ib};
          s.attach_directions = {fa, fb};
          const Vector qa = exit_point(cap_a.apex, cand_a[ka], ball.center, detour);
          const Vector qb = exit_point(cap_b.apex, cand_b[kb], ball.center, detour);
          append_dedup(s.route, pa);
          for (const auto& p : sphere_arc(ball.center, detour, qa, qb, long_way)) append_dedup(s.route, p);
          append_dedup(s.route, pb);
          std::vector<HyperStrip> strips{s};
          if (!check) return strips;
          const std::string why = validate(caps, cylinders, strips, plan, options, 0);
          if (why.empty()) return strips;
          if (first_failure.empty()) first_failure = why;
        }
      }
    }
    throw Error(ErrorCode::RoutingFailed, "loop strip: " + first_failure);
  }

  if (!plan.infinity_direction) throw Error(ErrorCode::InvalidInput, "infinity closure without a direction");
  const Vector& v = *plan.infinity_direction;
  const double length = options.strip_length.value_or(kDefaultStripFactor * ball.radius);
  const bool a_is_far = (cap_a.apex - ball.center).norm() >= (cap_b.apex - ball.center).norm();

  auto make = [&](std::size_t ci, const HyperCap& cap, const Vector& free_dir, const Vector& rim_point,
                  const Vector& leg, double sign, bool long_way) {
    HyperStrip s;
    s.kind = StripKind::ToInfinity;
    s.caps = {ci};
    s.attach_directions = {free_dir};
    s.truncation = length;
    const Vector q = exit_point(cap.apex, leg, ball.center, detour);
    const Vector e = ball.center + sign * detour * v;
    append_dedup(s.route, rim_point);
    for (const auto& p : sphere_arc(ball.center, detour, q, e, long_way)) append_dedup(s.route, p);
    append_dedup(s.route, Vector(e + sign * length * v));
    return s;
  };

  std::vector<HyperStrip> strips;
  const std::array<std::size_t, 2> which{ia, ib};
  for (std::size_t k = 0; k < 2; ++k) {
    const bool is_a = k == 0;
    const HyperCap& cap = is_a ? cap_a : cap_b;
    const auto& cands = is_a ? cand_a : cand_b;
    const double sign = (is_a == a_is_far) ? 1.0 : -1.0;
    bool placed = false;
    for (std::size_t c = 0; c < cands.size() && !placed; ++c) {
      for (bool long_way : {false, true}) {
        std::vector<HyperStrip> trial = strips;
        trial.push_back(make(which[k], cap, is_a ? fa : fb, is_a ? pa : pb, cands[c], sign, long_way));
        if (!check) {
          strips = std::move(trial);
          placed = true;
          break;
        }
        const std::string why = validate(caps, cylinders, trial, plan, options, k);
        if (why.empty()) {
          strips = std::move(trial);
          placed = true;
          break;
        }
        if (first_failure.empty()) first_failure = why;
      }
    }
    if (!placed) throw Error(ErrorCode::RoutingFailed, "strip_" + std::to_string(k) + ": " + first_failure);
  }
  return strips;
}

Hypersurface assemble(std::vector<HyperCap> caps, std::vector<CylinderSegment> cylinders,
                      std::vector<HyperStrip> strips, const ConnectionPlan& plan, const AssemblyOptions& options) {
  const std::size_t n = plan.order.size();
  if (caps.size() != n) {
    throw Error(ErrorCode::ComponentMismatch,
                "expected " + std::to_string(n) + " caps, got " + std::to_string(caps.size()));
  }
  if (cylinders.size() + 1 != n) {
    throw Error(ErrorCode::ComponentMismatch,
                "expected " + std::to_string(n - 1) + " cylinders, got " + std::to_string(cylinders.size()));
  }
  for (std::size_t p = 0; p + 1 < n; ++p) {
    if (cylinders[p].cap_i != plan.order[p] || cylinders[p].cap_j != plan.order[p + 1]) {
      throw Error(ErrorCode::ComponentMismatch, "cylinder " + std::to_string(p) + " does not follow the path");
    }
  }
  const bool loop = plan.closure == Closure::Loop;
  const std::size_t want = loop ? 1 : 2;
  if (strips.size() != want) {
    throw Error(ErrorCode::ComponentMismatch,
                "expected " + std::to_string(want) + " strips, got " + std::to_string(strips.size()));
  }
  for (const auto& s : strips) {
    const bool ok = loop ? (s.kind == StripKind::ClosingLoop && s.caps.size() == 2)
                         : (s.kind == StripKind::ToInfinity && s.caps.size() == 1);
    if (!ok || s.attach_directions.size() != s.caps.size() || s.route.size() < 2) {
      throw Error(ErrorCode::ComponentMismatch, "strip kind or attachments disagree with the closure mode");
    }
  }
  Hypersurface w;
  w.dim = caps.front().apex.size();
  w.closure = plan.closure;
  w.plan = plan;
  w.ball = bounding_ball(caps);
  w.options = options;
  if (w.dim <= 3) w.mesh = build_mesh(caps, cylinders, strips, plan, options);
  w.caps = std::move(caps);
  w.cylinders = std::move(cylinders);
  w.strips = std::move(strips);
  return w;
}

double along_cap_length(const HyperCap& cap, const Vector& direction, std::size_t cap_samples) {
  if (cap.apex.size() != 2) return cap.delta;
  const auto pts = half_arc(cap, direction, half_samples(cap_samples));
  double len = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) len += (pts[k] - pts[k - 1]).norm();
  return len;
}

}  // namespace oscul
