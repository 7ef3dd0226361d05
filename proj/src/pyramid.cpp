#include "oscul/pyramid.hpp"

#include <cmath>
#include <string>

#include "oscul/error.hpp"
#include "oscul/parallel.hpp"

namespace oscul {

namespace {

Vector surface_normal(const HyperCap& cap) {
  return cap.sphere.is_flat() ? cap.sphere.normal : cap.sphere.inward_normal();
}

Vector tangent_part(const Vector& v, const Vector& n) { return v - v.dot(n) * n; }

// Gram-Schmidt of `cols` against `fixed` (orthonormal), topping up from the
// coordinate axes when a column collapses.
Eigen::MatrixXd orthonormal_completion(const std::vector<Vector>& fixed, const std::vector<Vector>& cols,
                                       std::size_t want) {
  const Eigen::Index d = fixed.front().size();
  std::vector<Vector> basis = fixed;
  std::vector<Vector> out;
  auto try_add = [&](Vector v) {
    for (const auto& b : basis) v -= v.dot(b) * b;
    for (const auto& b : basis) v -= v.dot(b) * b;  // second pass for accuracy
    if (v.norm() < 1e-8) return;
    v.normalize();
    basis.push_back(v);
    out.push_back(v);
  };
  for (const auto& c : cols) {
    if (out.size() < want) try_add(c);
  }
  for (Eigen::Index k = 0; k < d && out.size() < want; ++k) try_add(Vector::Unit(d, k));
  Eigen::MatrixXd m(d, static_cast<Eigen::Index>(out.size()));
  for (std::size_t k = 0; k < out.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = out[k];
  return m;
}

}  // namespace

Chart build_chart(const Hypersurface& w, const ConnectionPlan& plan) {
  if (plan.order != w.plan.order) throw Error(ErrorCode::ChartMismatch, "plan does not belong to this hypersurface");
  const std::size_t n = plan.order.size();
  if (n < 2) throw Error(ErrorCode::DegeneratePath, "a chart needs at least two caps");
  const std::size_t d = w.dim;

  Chart chart;
  chart.order = plan.order;
  chart.apexes.resize(w.caps.size());
  chart.frames.resize(w.caps.size());
  chart.arc_length.assign(w.caps.size(), 0.0);
  for (std::size_t i = 0; i < w.caps.size(); ++i) chart.apexes[i] = w.caps[i].apex;

  Vector prev_normal;
  Eigen::MatrixXd prev_frame;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t ci = plan.order[p];
    const HyperCap& cap = w.caps[ci];
    Vector normal = surface_normal(cap);
    // Normals of flat caps carry no orientation; keep neighbors aligned.
    if (p > 0 && prev_normal.dot(normal) < 0.0) normal = -normal;
    const Vector step = p + 1 < n ? Vector(w.caps[plan.order[p + 1]].apex - cap.apex)
                                  : Vector(cap.apex - w.caps[plan.order[p - 1]].apex);
    if (step.norm() < kCoincidenceTolerance) {
      throw Error(ErrorCode::DegeneratePath, "apexes at path positions " + std::to_string(p) + " and " +
                                                 std::to_string(p + 1 < n ? p + 1 : p - 1) + " coincide");
    }
    std::vector<Vector> carried;
    if (p > 0) {
      // Minimal rotation taking the previous normal to this one.
      const Vector& a = prev_normal;
      const Vector& b = normal;
      const double c = a.dot(b);
      const Eigen::MatrixXd k = b * a.transpose() - a * b.transpose();
      const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) +
                                k + k * k / (1.0 + c);
      for (Eigen::Index col = 1; col < prev_frame.cols(); ++col) carried.push_back(r * prev_frame.col(col));
    }
    Vector first = tangent_part(step, normal);
    std::vector<Vector> seeds;
    if (first.norm() >= 1e-12 * step.norm()) {
      seeds.push_back(first.normalized());
    } else if (p > 0) {
      seeds.push_back(tangent_part(prev_frame.col(0), normal));
    }
    for (const auto& c : carried) seeds.push_back(c);
    const Eigen::MatrixXd frame = orthonormal_completion({normal}, seeds, d - 1);
    if (static_cast<std::size_t>(frame.cols()) != d - 1) {
      throw Error(ErrorCode::DegeneratePath, "could not complete the tangent frame at cap " + std::to_string(ci));
    }
    chart.frames[ci] = frame;
    prev_normal = normal;
    prev_frame = frame;
  }

  for (std::size_t p = 0; p + 1 < n; ++p) {
    const CylinderSegment& cyl = w.cylinders[p];
    const double gap = along_cap_length(w.caps[cyl.cap_i], cyl.direction_i, w.options.cap_samples) +
                       (cyl.rim_point_i - cyl.rim_point_j).norm() +
                       along_cap_length(w.caps[cyl.cap_j], cyl.direction_j, w.options.cap_samples);
    chart.arc_length[plan.order[p + 1]] = chart.arc_length[plan.order[p]] + gap;
  }
  return chart;
}

PointCloud represent(const PointCloud& cloud, const Hypersurface& w, const Chart& chart) {
  if (cloud.dim() != chart.dim() || chart.apexes.size() != w.caps.size()) {
    throw Error(ErrorCode::ChartMismatch, "cloud of dimension " + std::to_string(cloud.dim()) +
                                              " does not match a chart of dimension " + std::to_string(chart.dim()));
  }
  const std::size_t d = cloud.dim();
  std::vector<Vector> out(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t q) {
    const Vector& x = cloud[q];
    std::size_t best = 0;
    double best_d = (x - chart.apexes[0]).squaredNorm();
    for (std::size_t i = 1; i < chart.apexes.size(); ++i) {
      const double di = (x - chart.apexes[i]).squaredNorm();
      if (di < best_d) {
        best = i;
        best_d = di;
      }
    }
    Vector y(static_cast<Eigen::Index>(d - 1));
    y(0) = chart.arc_length[best];
    const Vector off = x - chart.apexes[best];
    for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(d - 1); ++k) y(k) = chart.frames[best].col(k).dot(off);
    out[q] = std::move(y);
  });
  return PointCloud(std::move(out), cloud.provenance());
}

Pyramid induct(const PointCloud& cloud, std::size_t target_dim, const RunConfig& config) {
  if (target_dim < 1 || target_dim >= cloud.dim()) {
    throw Error(ErrorCode::InvalidInput, "target dimension must lie in [1, " + std::to_string(cloud.dim()) +
                                             "), got " + std::to_string(target_dim));
  }
  Pyramid pyr;
  PointCloud current = cloud;
  while (true) {
    PyramidLevel level;
    level.dim = current.dim();
    level.cloud = current;
    if (level.dim == target_dim) {
      pyr.levels.push_back(std::move(level));
      return pyr;
    }
    if (!current.has_enough_samples()) {
      throw Error(ErrorCode::LevelInfeasible,
                  "n = " + std::to_string(current.size()) + " is not above dim " + std::to_string(level.dim) +
                      "; deepest level reached has dim " +
                      std::to_string(pyr.levels.empty() ? cloud.dim() : pyr.levels.back().dim));
    }
    level.build = build_hypersurface(current, config);
    level.chart = build_chart(level.build->surface, level.build->surface.plan);
    PointCloud next = represent(current, level.build->surface, *level.chart);
    pyr.levels.push_back(std::move(level));
    current = std::move(next);
  }
}

}  // namespace oscul
