#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oscul/pipeline.hpp"

namespace oscul {

/// Strip chart of W: arc length along the cap path plus a tangent frame per cap.
///
/// frames[i] is d x (d-1) with orthonormal columns spanning the tangent
/// hyperplane at apex i. Column 0 follows the path; the remaining columns are
/// carried from cap to cap by the minimal rotation between consecutive
/// tangent hyperplanes.
struct Chart {
  std::vector<std::size_t> order;
  std::vector<Vector> apexes;
  std::vector<Eigen::MatrixXd> frames;
  std::vector<double> arc_length;  // indexed like the caps

  std::size_t dim() const { return apexes.empty() ? 0 : static_cast<std::size_t>(apexes.front().size()); }
};

/// Throws DegeneratePath if consecutive apexes coincide and ChartMismatch if
/// the plan does not belong to W.
Chart build_chart(const Hypersurface& w, const ConnectionPlan& plan);

/// Maps each point to (s_i, E_i^T (x - apex_i)) for its nearest apex i,
/// where E_i are the frame columns after the first. Output dimension d - 1.
PointCloud represent(const PointCloud& cloud, const Hypersurface& w, const Chart& chart);

struct PyramidLevel {
  std::size_t dim = 0;
  PointCloud cloud;
  std::optional<BuildResult> build;  // absent on the last level
  std::optional<Chart> chart;
};

struct Pyramid {
  std::vector<PyramidLevel> levels;  // dims d, d-1, ..., target
};

/// Repeats fit, chart and represent until the target dimension. Throws
/// LevelInfeasible when a level has n <= dim.
Pyramid induct(const PointCloud& cloud, std::size_t target_dim, const RunConfig& config = {});

}  // namespace oscul
