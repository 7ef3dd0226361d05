#include "oscul/mesh.hpp"

#include <algorithm>
#include <limits>

#include "oscul/predicates.hpp"

namespace oscul {

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Cap: return "cap";
    case ComponentKind::Cylinder: return "cylinder";
    case ComponentKind::Strip: return "strip";
  }
  return "unknown";
}

std::vector<std::size_t> Mesh::element(std::size_t e) const {
  if (dim == 2) return {segments[e][0], segments[e][1]};
  return {triangles[e][0], triangles[e][1], triangles[e][2]};
}

double Mesh::distance_to(const Eigen::Vector3d& p) const {
  double best = std::numeric_limits<double>::infinity();
  if (dim == 2) {
    for (const auto& s : segments) {
      best = std::min(best, predicates::point_segment_distance(p, vertices[s[0]], vertices[s[1]]));
    }
  } else {
    for (const auto& t : triangles) {
      best = std::min(best, predicates::point_triangle_distance(p, vertices[t[0]], vertices[t[1]], vertices[t[2]]));
    }
  }
  return best;
}

}  // namespace oscul
