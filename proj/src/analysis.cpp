#include "oscul/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "oscul/error.hpp"
#include "oscul/neighborhood.hpp"
#include "oscul/parallel.hpp"

namespace oscul {

RadiusProfile radius_profile(const PointCloud& cloud, double epsilon) {
  const KnnGraph graph = knn(cloud);
  RadiusProfile profile;
  profile.epsilon = epsilon;
  profile.entries.resize(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    RadiusEntry& e = profile.entries[i];
    e.index = i;
    double sum = 0.0;
    for (double dist : graph.distances[i]) sum += dist;
    e.neighbor_scale = sum / static_cast<double>(graph.k);
    try {
      const SphereFit fit = osculating_sphere(cloud[i], neighbor_points(cloud, graph, i), epsilon);
      e.flat = fit.sphere.is_flat();
      e.normalized_radius = normalized_radius(fit);
      e.curvature = e.flat ? 0.0 : 1.0 / e.normalized_radius;
    } catch (const Error& err) {
      e.error = err.what();
      e.normalized_radius = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return profile;
}

StructureScore structure_score(const RadiusProfile& profile, double noise_threshold) {
  std::vector<double> ratios;
  for (const auto& e : profile.entries) {
    if (e.error) continue;
    if (e.flat || e.neighbor_scale <= 0.0) {
      ratios.push_back(1.0);
    } else {
      ratios.push_back(std::min(1.0, e.normalized_radius / e.neighbor_scale));
    }
  }
  if (ratios.empty()) throw Error(ErrorCode::EmptyProfile, "no usable profile entries");
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size();
  StructureScore s;
  s.score = m % 2 == 1 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  s.label = s.score < noise_threshold ? StructureLabel::NoiseLike : StructureLabel::Structured;
  return s;
}

namespace {

bool counts_as_flat(const RadiusEntry& e) {
  if (e.error) return false;
  return e.flat || e.normalized_radius > kLinearRadiusRatio * e.neighbor_scale;
}

}  // namespace

LinearityResult linearity_detect(const PointCloud& cloud, const RadiusProfile& profile,
                                 double flat_fraction_threshold) {
  if (profile.entries.empty()) throw Error(ErrorCode::EmptyProfile, "empty radius profile");
  if (profile.entries.size() != cloud.size()) {
    throw Error(ErrorCode::DimensionMismatch, "profile and cloud sizes differ");
  }
  std::vector<std::size_t> flat;
  for (const auto& e : profile.entries) {
    if (counts_as_flat(e)) flat.push_back(e.index);
  }
  LinearityResult r;
  r.flat_fraction = static_cast<double>(flat.size()) / static_cast<double>(profile.entries.size());
  r.is_linear = r.flat_fraction >= flat_fraction_threshold;
  const std::size_t d = cloud.dim();
  if (!r.is_linear || flat.size() < d) return r;

  // d flat points spread as far apart as possible: start with the first and
  // repeatedly add the point farthest from the affine span so far.
  std::vector<std::size_t> chosen{flat.front()};
  const Vector& base = cloud[flat.front()];
  Eigen::MatrixXd span(static_cast<Eigen::Index>(d), 0);
  while (chosen.size() < d) {
    std::size_t best = flat.front();
    double best_dist = -1.0;
    for (std::size_t i : flat) {
      Vector v = cloud[i] - base;
      if (span.cols() > 0) v -= span * (span.transpose() * v);
      const double dist = v.norm();
      if (dist > best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best_dist <= 0.0) break;
    Vector dir = cloud[best] - base;
    if (span.cols() > 0) dir -= span * (span.transpose() * dir);
    span.conservativeResize(Eigen::NoChange, span.cols() + 1);
    span.col(span.cols() - 1) = dir.normalized();
    chosen.push_back(best);
  }

  Eigen::MatrixXd a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  Vector mean = Vector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i : chosen) mean += cloud[i];
  mean /= static_cast<double>(chosen.size());
  a.setZero();
  for (std::size_t k = 0; k < chosen.size(); ++k) a.row(static_cast<Eigen::Index>(k)) = (cloud[chosen[k]] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  Vector normal = svd.matrixV().col(static_cast<Eigen::Index>(d) - 1);
  Eigen::Index big = 0;
  normal.cwiseAbs().maxCoeff(&big);
  if (normal(big) < 0.0) normal = -normal;
  const double offset = normal.dot(mean);

  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) worst = std::max(worst, std::abs(normal.dot(cloud[i]) - offset));
  r.hyperplane = GeneralizedSphere::flat(normal, offset, cloud[chosen.front()]);
  r.residual = worst;
  return r;
}

}  // namespace oscul
