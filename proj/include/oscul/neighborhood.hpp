#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "oscul/point_cloud.hpp"

namespace oscul {

/// Exact k = d nearest neighbors of every point.
struct KnnGraph {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> neighbor_indices;
  std::vector<std::vector<double>> distances;
};

/// Brute force, ties broken by the smaller index. Throws TooFewPoints if n <= d.
KnnGraph knn(const PointCloud& cloud);

/// The d neighbors of point i as coordinates, in ascending distance.
std::vector<Vector> neighbor_points(const PointCloud& cloud, const KnnGraph& graph, std::size_t i);

enum class Closure { Loop, Infinity };

/// Visit order of the caps and the edges joining consecutive ones.
struct ConnectionPlan {
  std::vector<std::size_t> order;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t boundary_a = 0;
  std::size_t boundary_b = 0;
  Closure closure = Closure::Loop;
  /// Unit vector from the centroid through the endpoint farther from it.
  std::optional<Vector> infinity_direction;
  std::size_t moves_applied = 0;
};

struct PathOptions {
  /// Maximum number of 2-opt moves; unset means 10 n^2.
  std::optional<std::size_t> move_budget;
  /// 0 scans candidate moves in natural order; other values shuffle it.
  std::uint64_t seed = 0;
};

/// Greedy nearest-neighbor path from the lexicographically smallest point,
/// then 2-opt. In the plane the moves remove crossings and PathNotSimple is
/// thrown if any remain once the budget is spent; in higher dimensions the
/// moves shorten the path until no improving move is left.
ConnectionPlan select_path(const PointCloud& cloud, Closure closure, const PathOptions& options = {});

/// Number of pairs of non-adjacent path edges that touch or cross (d = 2).
std::size_t count_path_crossings(const PointCloud& cloud, const std::vector<std::size_t>& order);

}  // namespace oscul
