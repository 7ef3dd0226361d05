#include "oscul/pipeline.hpp"

#include <algorithm>
#include <string>

#include "oscul/error.hpp"
#include "oscul/parallel.hpp"

namespace oscul {

void RunConfig::normalize() {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  delta = std::min(delta, epsilon);
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidConfig, "delta must be positive");
  if (mesh_resolution < 8) {
    throw Error(ErrorCode::InvalidConfig, "mesh resolution must be at least 8, got " + std::to_string(mesh_resolution));
  }
  if (strip_length && !(*strip_length > 0.0)) throw Error(ErrorCode::InvalidConfig, "strip length must be positive");
}

std::vector<SphereFit> fit_all(const PointCloud& cloud, const KnnGraph& graph, double epsilon) {
  std::vector<SphereFit> fits(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    const auto nb = neighbor_points(cloud, graph, i);
    fits[i] = osculating_sphere(cloud[i], nb, epsilon);
  });
  return fits;
}

std::vector<HyperCap> cut_all(const PointCloud& cloud, const std::vector<SphereFit>& fits, double delta) {
  std::vector<HyperCap> caps(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    const auto& s = fits[i].sphere;
    const double di = s.is_flat() ? delta : std::min(delta, s.radius);
    caps[i] = cut_cap(s, cloud[i], di, fits[i].diagnostics.epsilon_used);
  });
  return caps;
}

namespace {

// Caps whose own mesh elements take part in an intersection. A planar cap
// crossed by one of its cylinders clears it once its arc is short enough.
std::vector<std::size_t> caps_in_intersections(const Hypersurface& w) {
  std::vector<std::size_t> out;
  if (!w.mesh) return out;
  const Mesh& m = *w.mesh;
  for (const auto& [a, b] : find_intersections(m)) {
    for (std::size_t e : {a, b}) {
      const MeshComponent& c = m.components[m.element_component[e]];
      if (c.kind != ComponentKind::Cap) continue;
      const std::size_t idx = std::stoul(c.label.substr(c.label.find('_') + 1));
      if (std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
    }
  }
  return out;
}

BuildResult attempt(const PointCloud& cloud, std::vector<HyperCap> caps, const RunConfig& config,
                    std::uint64_t seed) {
  PathOptions po;
  po.move_budget = config.path_move_budget;
  po.seed = seed;
  const ConnectionPlan plan = select_path(cloud, config.closure, po);
  AssemblyOptions ao;
  ao.cap_samples = config.mesh_resolution;
  ao.strip_length = config.strip_length;
  BuildResult r;
  r.seed_used = seed;
  for (std::size_t round = 0;; ++round) {
    auto cylinders = connect_path(caps, plan);
    auto strips = closing_strip(plan, caps, cylinders, ao);
    r.surface = assemble(caps, std::move(cylinders), std::move(strips), plan, ao);
    r.properties = verify(r.surface, &cloud);
    if (r.properties.injective.value_or(true) || round == kMaxCapShrinks) return r;
    const auto crowded = caps_in_intersections(r.surface);
    if (crowded.empty()) return r;
    for (std::size_t i : crowded) caps[i] = cut_cap(caps[i].sphere, caps[i].apex, caps[i].delta / 4, caps[i].delta);
  }
}

bool retryable(const Error& e) {
  return e.code() == ErrorCode::PathNotSimple || e.code() == ErrorCode::RoutingFailed;
}

}  // namespace

BuildResult build_hypersurface(const PointCloud& cloud, const RunConfig& config_in) {
  RunConfig config = config_in;
  config.normalize();
  if (cloud.dim() < 2) throw Error(ErrorCode::DimensionMismatch, "a hypersurface needs d >= 2");
  const KnnGraph graph = knn(cloud);
  const auto fits = fit_all(cloud, graph, config.epsilon);
  const auto caps = cut_all(cloud, fits, config.delta);

  try {
    BuildResult first = attempt(cloud, caps, config, config.seed);
    if (first.properties.injective.value_or(true)) return first;
  } catch (const Error& e) {
    if (!retryable(e)) throw;
  }
  BuildResult second = attempt(cloud, caps, config, config.seed + 1);
  second.attempts = 2;
  return second;
}

}  // namespace oscul
