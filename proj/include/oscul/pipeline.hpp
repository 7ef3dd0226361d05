#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "oscul/geometry.hpp"
#include "oscul/neighborhood.hpp"
#include "oscul/point_cloud.hpp"
#include "oscul/surgery.hpp"
#include "oscul/verification.hpp"

namespace oscul {

struct RunConfig {
  double epsilon = 1e-3;
  double delta = 1e-4;
  Closure closure = Closure::Loop;
  std::size_t mesh_resolution = 32;
  std::optional<std::size_t> path_move_budget;
  std::optional<double> strip_length;
  std::uint64_t seed = 0;
  double noise_threshold = 0.5;

  /// Clamps delta to epsilon, then throws InvalidConfig unless
  /// 0 < delta <= epsilon < 1 and mesh_resolution >= 8.
  void normalize();
};

/// Osculating fit at every point against its k = d neighbors.
std::vector<SphereFit> fit_all(const PointCloud& cloud, const KnnGraph& graph, double epsilon);

/// Cuts every fitted sphere. The cap size is min(delta, radius) so that it
/// stays below the sphere diameter even where the fitted radius is tiny.
std::vector<HyperCap> cut_all(const PointCloud& cloud, const std::vector<SphereFit>& fits, double delta);

/// Times a cap touched by an intersection is cut again at a quarter of its
/// size before the attempt is given up.
inline constexpr std::size_t kMaxCapShrinks = 6;

struct BuildResult {
  Hypersurface surface;
  PropertyReport properties;
  std::size_t attempts = 1;
  std::uint64_t seed_used = 0;
};

/// knn, fits, path, caps, cylinders, strips, assembly and verification. Caps
/// involved in an intersection are shrunk and reconnected; if the result is
/// still not injective, or a path or strip cannot be made simple, the path is
/// re-selected once with the next seed. The returned properties may
/// still show violations; routing and path errors of the last attempt throw.
BuildResult build_hypersurface(const PointCloud& cloud, const RunConfig& config);

}  // namespace oscul
