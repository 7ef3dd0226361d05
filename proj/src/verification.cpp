#include "oscul/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "oscul/error.hpp"
#include "oscul/parallel.hpp"
#include "oscul/predicates.hpp"

namespace oscul {

namespace {

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

const Mesh& require_mesh(const Hypersurface& w) {
  if (!w.mesh) {
    throw Error(ErrorCode::NoMesh, "no mesh for d = " + std::to_string(w.dim) + "; mesh checks need d <= 3");
  }
  return *w.mesh;
}

// Triangles incident to each undirected edge.
std::unordered_map<std::uint64_t, std::vector<std::size_t>> edge_incidence(const Mesh& mesh) {
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> map;
  map.reserve(mesh.triangles.size() * 2);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) map[edge_key(tri[k], tri[(k + 1) % 3])].push_back(t);
  }
  return map;
}

// +1 if the triangle traverses a -> b, -1 if b -> a.
int edge_direction(const std::array<std::size_t, 3>& tri, std::size_t a, std::size_t b) {
  for (int k = 0; k < 3; ++k) {
    if (tri[k] == a && tri[(k + 1) % 3] == b) return 1;
    if (tri[k] == b && tri[(k + 1) % 3] == a) return -1;
  }
  return 0;
}

// Orientation flags by propagation; empty when inconsistent.
std::optional<std::vector<bool>> propagate_orientation(const Mesh& mesh) {
  const auto incidence = edge_incidence(mesh);
  for (const auto& [key, tris] : incidence) {
    if (tris.size() > 2) return std::nullopt;
  }
  const std::size_t m = mesh.triangles.size();
  std::vector<int> flip(m, -1);
  for (std::size_t seed = 0; seed < m; ++seed) {
    if (flip[seed] >= 0) continue;
    flip[seed] = 0;
    std::deque<std::size_t> queue{seed};
    while (!queue.empty()) {
      const std::size_t t = queue.front();
      queue.pop_front();
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        const std::size_t a = tri[k], b = tri[(k + 1) % 3];
        const auto& tris = incidence.at(edge_key(a, b));
        if (tris.size() != 2) continue;
        const std::size_t u = tris[0] == t ? tris[1] : tris[0];
        const int dt = edge_direction(tri, a, b) * (flip[t] ? -1 : 1);
        const int du_raw = edge_direction(mesh.triangles[u], a, b);
        // Neighbors must traverse the shared edge in opposite directions.
        const int need = (du_raw == -dt) ? 0 : 1;
        if (flip[u] < 0) {
          flip[u] = need;
          queue.push_back(u);
        } else if (flip[u] != need) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<bool> out(m);
  for (std::size_t t = 0; t < m; ++t) out[t] = flip[t] == 1;
  return out;
}

struct Box {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
};

Box element_box(const Mesh& mesh, std::size_t e) {
  Box b{Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity()),
        Eigen::Vector3d::Constant(-std::numeric_limits<double>::infinity())};
  for (std::size_t v : mesh.element(e)) {
    b.lo = b.lo.cwiseMin(mesh.vertices[v]);
    b.hi = b.hi.cwiseMax(mesh.vertices[v]);
  }
  return b;
}

bool share_vertex(const Mesh& mesh, std::size_t a, std::size_t b) {
  const auto va = mesh.element(a);
  const auto vb = mesh.element(b);
  for (std::size_t x : va) {
    for (std::size_t y : vb) {
      if (x == y) return true;
    }
  }
  return false;
}

double mesh_scale(const Mesh& mesh) {
  double s = 1.0;
  for (const auto& v : mesh.vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

bool elements_intersect(const Mesh& mesh, std::size_t a, std::size_t b, double tol) {
  const auto& v = mesh.vertices;
  if (mesh.dim == 2) {
    const auto& s = mesh.segments[a];
    const auto& t = mesh.segments[b];
    return predicates::segments_intersect(v[s[0]].head<2>(), v[s[1]].head<2>(), v[t[0]].head<2>(),
                                          v[t[1]].head<2>());
  }
  const auto& s = mesh.triangles[a];
  const auto& t = mesh.triangles[b];
  return predicates::triangles_intersect(v[s[0]], v[s[1]], v[s[2]], v[t[0]], v[t[1]], v[t[2]], tol);
}

}  // namespace

BoundaryResult check_boundary(const Mesh& mesh) {
  BoundaryResult r;
  if (mesh.dim == 2) {
    std::unordered_map<std::size_t, std::size_t> degree;
    for (const auto& s : mesh.segments) {
      ++degree[s[0]];
      ++degree[s[1]];
    }
    for (const auto& [v, deg] : degree) {
      if (deg == 1) r.vertices.push_back(v);
    }
    for (const auto& c : mesh.components) {
      if (c.kind != ComponentKind::Strip || c.element_count == 0) continue;
      r.vertices.push_back(mesh.segments[c.first_element][0]);
      r.vertices.push_back(mesh.segments[c.first_element + c.element_count - 1][1]);
    }
    std::sort(r.vertices.begin(), r.vertices.end());
    r.vertices.erase(std::unique(r.vertices.begin(), r.vertices.end()), r.vertices.end());
    r.has_boundary = !r.vertices.empty();
    return r;
  }
  for (const auto& [key, tris] : edge_incidence(mesh)) {
    if (tris.size() == 1) r.edges.push_back({static_cast<std::size_t>(key >> 32), static_cast<std::size_t>(key & 0xffffffffu)});
  }
  std::sort(r.edges.begin(), r.edges.end());
  r.has_boundary = !r.edges.empty();
  return r;
}

BoundaryResult check_boundary(const Hypersurface& w) { return check_boundary(require_mesh(w)); }

bool check_orientability(const Mesh& mesh) {
  if (mesh.dim == 2) return true;
  return propagate_orientation(mesh).has_value();
}

bool check_orientability(const Hypersurface& w) { return check_orientability(require_mesh(w)); }

bool orient_consistently(Mesh& mesh) {
  if (mesh.dim == 2) return true;
  const auto flips = propagate_orientation(mesh);
  if (!flips) return false;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if ((*flips)[t]) std::swap(mesh.triangles[t][1], mesh.triangles[t][2]);
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> find_intersections(const Mesh& mesh, const std::vector<bool>* focus,
                                                                    std::size_t max_hits) {
  const std::size_t m = mesh.element_count();
  const double tol = 1e-12 * mesh_scale(mesh);
  std::vector<Box> boxes(m);
  for (std::size_t e = 0; e < m; ++e) boxes[e] = element_box(mesh, e);
  std::vector<std::size_t> by_x(m);
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].lo.x() < boxes[b].lo.x() || (boxes[a].lo.x() == boxes[b].lo.x() && a < b);
  });
  auto focused = [&](std::size_t e) { return focus == nullptr || (*focus)[mesh.element_component[e]]; };

  // Sweep along x; each worker owns a range of start positions.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> found(m);
  std::atomic<std::size_t> total{0};
  parallel_for(m, [&](std::size_t i) {
    if (total.load(std::memory_order_relaxed) >= max_hits) return;
    const std::size_t a = by_x[i];
    const Box& ba = boxes[a];
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t b = by_x[j];
      const Box& bb = boxes[b];
      if (bb.lo.x() > ba.hi.x() + tol) break;
      if (!focused(a) && !focused(b)) continue;
      if ((bb.lo.array() > ba.hi.array() + tol).any() || (ba.lo.array() > bb.hi.array() + tol).any()) continue;
      if (share_vertex(mesh, a, b)) continue;
      if (elements_intersect(mesh, a, b, tol)) {
        found[i].emplace_back(std::min(a, b), std::max(a, b));
        total.fetch_add(1, std::memory_order_relaxed);
      }
    }
  });
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  for (auto& f : found) hits.insert(hits.end(), f.begin(), f.end());
  std::sort(hits.begin(), hits.end());
  if (hits.size() > max_hits) hits.resize(max_hits);
  return hits;
}

InjectivityResult check_injectivity(const Mesh& mesh) {
  InjectivityResult r;
  r.intersections = find_intersections(mesh);
  r.injective = r.intersections.empty();
  return r;
}

InjectivityResult check_injectivity(const Hypersurface& w) { return check_injectivity(require_mesh(w)); }

BoundednessResult check_boundedness(const Hypersurface& w) {
  BoundednessResult r;
  r.bounded = w.closure == Closure::Loop;
  if (r.bounded) {
    // Every component stays within the strip detour sphere plus a cap size.
    double reach = 1.5 * w.ball.radius;
    for (const auto& c : w.caps) reach = std::max(reach, (c.apex - w.ball.center).norm() + c.delta);
    for (const auto& s : w.strips) {
      for (const auto& p : s.route) reach = std::max(reach, (p - w.ball.center).norm());
    }
    double delta = 0.0;
    for (const auto& c : w.caps) delta = std::max(delta, c.delta);
    r.radius = reach + 2.0 * delta;
  }
  return r;
}

bool check_compactness(bool has_boundary, bool bounded) { return bounded && !has_boundary; }

long euler_characteristic(const Mesh& mesh) {
  std::vector<bool> used(mesh.vertices.size(), false);
  std::size_t edges = 0;
  if (mesh.dim == 2) {
    for (const auto& s : mesh.segments) used[s[0]] = used[s[1]] = true;
    edges = mesh.segments.size();
    const auto v = static_cast<long>(std::count(used.begin(), used.end(), true));
    return v - static_cast<long>(edges);
  }
  for (const auto& t : mesh.triangles) used[t[0]] = used[t[1]] = used[t[2]] = true;
  edges = edge_incidence(mesh).size();
  const auto v = static_cast<long>(std::count(used.begin(), used.end(), true));
  return v - static_cast<long>(edges) + static_cast<long>(mesh.triangles.size());
}

std::size_t connected_components(const Mesh& mesh) {
  std::vector<std::size_t> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(mesh.vertices.size(), false);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto vs = mesh.element(e);
    for (std::size_t v : vs) used[v] = true;
    for (std::size_t k = 1; k < vs.size(); ++k) parent[find(vs[k])] = find(vs[0]);
  }
  std::size_t count = 0;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (used[v] && find(v) == v) ++count;
  }
  return count;
}

PropertyReport verify(const Hypersurface& w, const PointCloud* cloud) {
  PropertyReport r;
  r.local_dimension = w.dim - 1;
  const auto bounded = check_boundedness(w);
  r.bounded = bounded.bounded;
  r.bounding_radius = bounded.radius;
  if (!w.mesh) {
    r.not_verified = {"has_boundary", "orientable", "injective", "membership"};
    if (!r.bounded) {
      r.compact = false;
    } else {
      r.not_verified.push_back("compact");
    }
    return r;
  }
  const Mesh& mesh = *w.mesh;
  const auto boundary = check_boundary(mesh);
  r.has_boundary = boundary.has_boundary;
  r.orientable = check_orientability(mesh);
  const auto inj = check_injectivity(mesh);
  r.injective = inj.injective;
  r.compact = check_compactness(boundary.has_boundary, r.bounded);
  r.euler_characteristic = euler_characteristic(mesh);
  r.connected_components = connected_components(mesh);

  for (const auto& [a, b] : inj.intersections) {
    r.violations.push_back({"injective", mesh.components[mesh.element_component[a]].label + " element " +
                                             std::to_string(a) + " meets " +
                                             mesh.components[mesh.element_component[b]].label + " element " +
                                             std::to_string(b)});
  }
  if (!*r.orientable) r.violations.push_back({"orientable", "triangle orientation conflict"});
  if (!boundary.has_boundary) r.violations.push_back({"has_boundary", "mesh has no free edges"});

  if (cloud != nullptr) {
    const double tol = 1e-9 * std::max(w.ball.radius, 1e-300);
    double worst = 0.0;
    for (std::size_t i = 0; i < cloud->size(); ++i) {
      Eigen::Vector3d p = Eigen::Vector3d::Zero();
      for (Eigen::Index k = 0; k < (*cloud)[i].size(); ++k) p(k) = (*cloud)[i](k);
      const double dist = mesh.distance_to(p);
      worst = std::max(worst, dist);
      if (dist > tol) r.violations.push_back({"membership", "point " + std::to_string(i) + " is " + std::to_string(dist) + " from the mesh"});
    }
    r.max_membership_distance = worst;
  }
  return r;
}

bool meets_construction_claims(const PropertyReport& r, Closure closure) {
  auto holds = [](const std::optional<bool>& v, bool expected) { return !v || *v == expected; };
  return holds(r.has_boundary, true) && holds(r.orientable, true) && holds(r.injective, true) &&
         r.bounded == (closure == Closure::Loop) && holds(r.compact, false) && r.violations.empty();
}

}  // namespace oscul
