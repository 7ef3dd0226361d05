#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace oscul {

using Vector = Eigen::VectorXd;

/// A finite sample of points in R^d.
///
/// Construction checks that every point has the same dimension and finite
/// coordinates. The sample-size requirement n > d is not a construction
/// invariant (two-point clouds are legal inputs to path selection); the
/// operations that need it (knn, radius_profile, induct) check it themselves.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vector> points, std::string provenance = {});

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return points_.empty(); }

  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vector>& points() const { return points_; }
  const std::string& provenance() const { return provenance_; }

  /// n > d, the minimum needed for a d-neighbor fit at every point.
  bool has_enough_samples() const { return points_.size() > dim_; }

  Vector centroid() const;
  /// Radius of the ball around the centroid containing every point.
  double bounding_radius() const;

 private:
  std::vector<Vector> points_;
  std::size_t dim_ = 0;
  std::string provenance_;
};

}  // namespace oscul
