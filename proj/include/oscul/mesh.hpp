#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace oscul {

enum class ComponentKind { Cap, Cylinder, Strip };

std::string_view to_string(ComponentKind kind);

/// A contiguous run of mesh elements belonging to one component of W.
struct MeshComponent {
  ComponentKind kind = ComponentKind::Cap;
  std::string label;  // cap_i, cyl_i_j or strip_k
  std::size_t first_element = 0;
  std::size_t element_count = 0;
};

/// Discretized hypersurface: a polyline in the plane or a triangle mesh in
/// space. Planar vertices are stored with z = 0 so both cases share storage.
struct Mesh {
  int dim = 2;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<std::size_t, 2>> segments;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::size_t> element_component;
  std::vector<MeshComponent> components;

  std::size_t element_count() const { return dim == 2 ? segments.size() : triangles.size(); }

  /// Vertex indices of element e (2 or 3 entries).
  std::vector<std::size_t> element(std::size_t e) const;

  /// Euclidean distance from p to the nearest element.
  double distance_to(const Eigen::Vector3d& p) const;
};

}  // namespace oscul
