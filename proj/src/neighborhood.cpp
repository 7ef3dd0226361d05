#include "oscul/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "oscul/error.hpp"
#include "oscul/parallel.hpp"
#include "oscul/predicates.hpp"

namespace oscul {

KnnGraph knn(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  if (n <= d) {
    throw Error(ErrorCode::TooFewPoints, "knn needs n > d, got n=" + std::to_string(n) + ", d=" + std::to_string(d));
  }
  KnnGraph g;
  g.k = d;
  g.neighbor_indices.resize(n);
  g.distances.resize(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back((cloud[i] - cloud[j]).squaredNorm(), j);
    }
    // pair ordering compares the index second, which is the tie-break we want
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(d), cand.end());
    auto& idx = g.neighbor_indices[i];
    auto& dist = g.distances[i];
    for (std::size_t m = 0; m < d; ++m) {
      idx.push_back(cand[m].second);
      dist.push_back(std::sqrt(cand[m].first));
    }
  });
  return g;
}

std::vector<Vector> neighbor_points(const PointCloud& cloud, const KnnGraph& graph, std::size_t i) {
  std::vector<Vector> out;
  out.reserve(graph.k);
  for (std::size_t j : graph.neighbor_indices.at(i)) out.push_back(cloud[j]);
  return out;
}

namespace {

predicates::P2 as2(const Vector& v) { return {v(0), v(1)}; }

bool edges_cross(const PointCloud& cloud, const std::vector<std::size_t>& o, std::size_t i, std::size_t j) {
  return predicates::segments_intersect(as2(cloud[o[i]]), as2(cloud[o[i + 1]]), as2(cloud[o[j]]),
                                        as2(cloud[o[j + 1]]));
}

std::vector<std::size_t> scan_order(std::size_t m, std::uint64_t seed) {
  std::vector<std::size_t> s(m);
  std::iota(s.begin(), s.end(), 0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(s.begin(), s.end(), rng);
  }
  return s;
}

std::vector<std::size_t> greedy_path(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto& a = cloud[i];
    const auto& b = cloud[start];
    if (std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size())) start = i;
  }
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order{start};
  used[start] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t cur = order.back();
    std::size_t best = n;
    double best_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double dj = (cloud[cur] - cloud[j]).squaredNorm();
      if (best == n || dj < best_d) {
        best = j;
        best_d = dj;
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

// Reverses the section between two crossing edges until none cross.
std::size_t uncross(const PointCloud& cloud, std::vector<std::size_t>& order, std::size_t budget,
                    std::uint64_t seed) {
  const std::size_t m = order.size() - 1;  // edge count
  const auto scan = scan_order(m, seed);
  std::size_t moves = 0;
  while (true) {
    bool found = false;
    std::size_t lo = 0, hi = 0;
    for (std::size_t a : scan) {
      for (std::size_t b = 0; b < m && !found; ++b) {
        if ((a > b ? a - b : b - a) < 2) continue;
        lo = std::min(a, b);
        hi = std::max(a, b);
        found = edges_cross(cloud, order, lo, hi);
      }
      if (found) break;
    }
    if (!found) return moves;
    if (moves >= budget) {
      throw Error(ErrorCode::PathNotSimple, "path edges " + std::to_string(lo) + " and " + std::to_string(hi) +
                                                " still cross after " + std::to_string(moves) + " 2-opt moves");
    }
    std::reverse(order.begin() + static_cast<std::ptrdiff_t>(lo + 1),
                 order.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    ++moves;
  }
}

std::size_t shorten(const PointCloud& cloud, std::vector<std::size_t>& order, std::size_t budget,
                    std::uint64_t seed) {
  const std::size_t n = order.size();
  if (n < 3) return 0;
  auto dist = [&](std::size_t p, std::size_t q) { return (cloud[order[p]] - cloud[order[q]]).norm(); };
  const double tol = 1e-12 * std::max(1.0, cloud.bounding_radius());
  const auto scan = scan_order(n - 1, seed);
  std::size_t moves = 0;
  bool improved = true;
  while (improved && moves < budget) {
    improved = false;
    for (std::size_t i : scan) {
      // Reversing order[0..i] swaps edge (i, i+1) for (0, i+1).
      if (i > 0 && dist(i, i + 1) - dist(0, i + 1) > tol) {
        std::reverse(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i + 1));
        improved = true;
      } else if (i + 1 < n - 1 && dist(i, i + 1) - dist(i, n - 1) > tol) {
        std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i + 1), order.end());
        improved = true;
      } else {
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
          const double gain = dist(i, i + 1) + dist(j, j + 1) - dist(i, j) - dist(i + 1, j + 1);
          if (gain > tol) {
            std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i + 1),
                         order.begin() + static_cast<std::ptrdiff_t>(j + 1));
            improved = true;
            break;
          }
        }
      }
      if (improved) {
        ++moves;
        break;
      }
    }
  }
  return moves;
}

}  // namespace

ConnectionPlan select_path(const PointCloud& cloud, Closure closure, const PathOptions& options) {
  const std::size_t n = cloud.size();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "a path needs at least 2 points, got " + std::to_string(n));
  const std::size_t budget = options.move_budget.value_or(10 * n * n);

  ConnectionPlan plan;
  plan.closure = closure;
  plan.order = greedy_path(cloud);
  if (cloud.dim() == 2) {
    plan.moves_applied = uncross(cloud, plan.order, budget, options.seed);
  } else {
    plan.moves_applied = shorten(cloud, plan.order, budget, options.seed);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) plan.edges.emplace_back(plan.order[i], plan.order[i + 1]);
  plan.boundary_a = plan.order.front();
  plan.boundary_b = plan.order.back();

  if (closure == Closure::Infinity) {
    const Vector c = cloud.centroid();
    const Vector ra = cloud[plan.boundary_a] - c;
    const Vector rb = cloud[plan.boundary_b] - c;
    Vector dir = ra.norm() >= rb.norm() ? ra : rb;
    if (dir.norm() == 0.0) {
      dir = Vector::Zero(static_cast<Eigen::Index>(cloud.dim()));
      dir(dir.size() - 1) = 1.0;
    }
    plan.infinity_direction = dir.normalized();
  }
  return plan;
}

std::size_t count_path_crossings(const PointCloud& cloud, const std::vector<std::size_t>& order) {
  if (cloud.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "crossing count is defined for planar paths");
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < order.size(); ++j) {
      if (edges_cross(cloud, order, i, j)) ++count;
    }
  }
  return count;
}

}  // namespace oscul
