#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscul/mesh.hpp"
#include "oscul/point_cloud.hpp"
#include "oscul/surgery.hpp"

namespace oscul {

struct Violation {
  std::string property;
  std::string location;
};

struct BoundaryResult {
  bool has_boundary = false;
  std::vector<std::array<std::size_t, 2>> edges;  // d = 3: edges with one incident triangle
  std::vector<std::size_t> vertices;              // d = 2: curve endpoints
};

/// Free edges of a triangle mesh, or for a polyline its degree-1 vertices and
/// the end vertices of strip components (the 0-dimensional sides of a strip).
BoundaryResult check_boundary(const Mesh& mesh);
BoundaryResult check_boundary(const Hypersurface& w);

/// Consistent triangle orientation by breadth-first propagation; false on a
/// conflict or an edge shared by more than two triangles. Polylines are
/// trivially orientable.
bool check_orientability(const Mesh& mesh);
bool check_orientability(const Hypersurface& w);

/// Flips triangles so that neighbors agree; returns false (leaving the
/// mesh partly flipped) when no consistent orientation exists.
bool orient_consistently(Mesh& mesh);

struct InjectivityResult {
  bool injective = true;
  std::vector<std::pair<std::size_t, std::size_t>> intersections;  // element pairs
};

/// Pairs of elements that share no vertex yet intersect. If `focus` is given,
/// only pairs with at least one element in a focused component are tested.
std::vector<std::pair<std::size_t, std::size_t>> find_intersections(
    const Mesh& mesh, const std::vector<bool>* focus = nullptr, std::size_t max_hits = SIZE_MAX);

InjectivityResult check_injectivity(const Mesh& mesh);
InjectivityResult check_injectivity(const Hypersurface& w);

struct BoundednessResult {
  bool bounded = false;
  std::optional<double> radius;  // of a ball containing W, when bounded
};

BoundednessResult check_boundedness(const Hypersurface& w);

/// Closed and bounded: false whenever there is a boundary.
bool check_compactness(bool has_boundary, bool bounded);

long euler_characteristic(const Mesh& mesh);
std::size_t connected_components(const Mesh& mesh);

struct PropertyReport {
  std::optional<bool> has_boundary;
  std::optional<bool> orientable;
  std::optional<bool> injective;
  bool bounded = false;
  std::optional<double> bounding_radius;
  std::optional<bool> compact;
  std::size_t local_dimension = 0;
  std::optional<long> euler_characteristic;
  std::optional<std::size_t> connected_components;
  std::optional<double> max_membership_distance;
  std::vector<std::string> not_verified;
  std::vector<Violation> violations;
};

/// Runs every check. Properties that need a mesh are listed in not_verified
/// when d >= 4. With a cloud, also checks that each point lies on the mesh
/// within 1e-9 of the bounding radius.
PropertyReport verify(const Hypersurface& w, const PointCloud* cloud = nullptr);

/// True when every verified property matches what the construction promises.
bool meets_construction_claims(const PropertyReport& report, Closure closure);

}  // namespace oscul
