#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oscul/geometry.hpp"
#include "oscul/point_cloud.hpp"

namespace oscul {

struct RadiusEntry {
  std::size_t index = 0;
  bool flat = false;
  double normalized_radius = 0.0;  // +infinity when flat
  double curvature = 0.0;          // 1 / normalized_radius
  double neighbor_scale = 0.0;     // mean distance to the d neighbors
  std::optional<std::string> error;  // fit failure at this point, if any
};

struct RadiusProfile {
  double epsilon = 0.0;
  std::vector<RadiusEntry> entries;
};

/// knn plus an osculating fit at every point. A failing fit is recorded on its
/// entry and skipped by the scores; TooFewPoints is thrown if n <= d.
RadiusProfile radius_profile(const PointCloud& cloud, double epsilon);

enum class StructureLabel { Structured, NoiseLike };

struct StructureScore {
  double score = 0.0;
  StructureLabel label = StructureLabel::Structured;
};

/// Median over points of min(1, normalized_radius / neighbor_scale), flat
/// entries counting as 1. NoiseLike iff the score is below the threshold.
StructureScore structure_score(const RadiusProfile& profile, double noise_threshold = 0.5);

struct LinearityResult {
  bool is_linear = false;
  double flat_fraction = 0.0;
  std::optional<GeneralizedSphere> hyperplane;
  std::optional<double> residual;  // max distance of any point from the hyperplane
};

/// Entries count as flat when the fit is flat or its normalized radius exceeds
/// 1e6 neighbor scales. When enough are flat, a hyperplane is fitted by least
/// squares to d well-spread flat points and checked against every point.
LinearityResult linearity_detect(const PointCloud& cloud, const RadiusProfile& profile,
                                 double flat_fraction_threshold = 0.9);

inline constexpr double kLinearRadiusRatio = 1e6;

}  // namespace oscul
