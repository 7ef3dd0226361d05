#include "oscul/point_cloud.hpp"

#include <algorithm>
#include <cmath>

#include "oscul/error.hpp"

namespace oscul {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::PathNotSimple: return "PathNotSimple";
    case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::ApexNotOnSphere: return "ApexNotOnSphere";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::CapsOverlap: return "CapsOverlap";
    case ErrorCode::RoutingFailed: return "RoutingFailed";
    case ErrorCode::ComponentMismatch: return "ComponentMismatch";
    case ErrorCode::NoMesh: return "NoMesh";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::ChartMismatch: return "ChartMismatch";
    case ErrorCode::LevelInfeasible: return "LevelInfeasible";
    case ErrorCode::EmptyProfile: return "EmptyProfile";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

PointCloud::PointCloud(std::vector<Vector> points, std::string provenance)
    : points_(std::move(points)), provenance_(std::move(provenance)) {
  if (points_.empty()) {
    return;
  }
  dim_ = static_cast<std::size_t>(points_.front().size());
  if (dim_ == 0) {
    throw Error(ErrorCode::DimensionMismatch, "points must have at least one coordinate");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<std::size_t>(points_[i].size()) != dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "point " + std::to_string(i) + " has dimension " +
                      std::to_string(points_[i].size()) + ", expected " + std::to_string(dim_));
    }
    if (!points_[i].allFinite()) {
      throw Error(ErrorCode::InvalidInput, "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

Vector PointCloud::centroid() const {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (const auto& p : points_) c += p;
  if (!points_.empty()) c /= static_cast<double>(points_.size());
  return c;
}

double PointCloud::bounding_radius() const {
  const Vector c = centroid();
  double r = 0.0;
  for (const auto& p : points_) r = std::max(r, (p - c).norm());
  return r;
}

}  // namespace oscul
