#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "oscul/error.hpp"
#include "oscul/pipeline.hpp"
#include "oscul/verification.hpp"

using namespace oscul;

namespace {

Mesh one_component(Mesh m) {
  m.element_component.assign(m.element_count(), 0);
  m.components = {{ComponentKind::Cap, "cap_0", 0, m.element_count()}};
  return m;
}

Mesh mobius(std::size_t m) {
  Mesh mesh;
  mesh.dim = 3;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    for (double s : {-0.3, 0.3}) {
      const double r = 1 + s * std::cos(t / 2);
      mesh.vertices.emplace_back(r * std::cos(t), r * std::sin(t), s * std::sin(t / 2));
    }
  }
  auto top = [](std::size_t i) { return 2 * i; };
  auto bot = [](std::size_t i) { return 2 * i + 1; };
  for (std::size_t i = 0; i + 1 < m; ++i) {
    mesh.triangles.push_back({top(i), bot(i), top(i + 1)});
    mesh.triangles.push_back({bot(i), bot(i + 1), top(i + 1)});
  }
  mesh.triangles.push_back({top(m - 1), bot(m - 1), bot(0)});
  mesh.triangles.push_back({bot(m - 1), top(0), bot(0)});
  return one_component(mesh);
}

Mesh annulus(std::size_t m) {
  Mesh mesh;
  mesh.dim = 3;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    mesh.vertices.emplace_back(std::cos(t), std::sin(t), 0.0);
    mesh.vertices.emplace_back(1.5 * std::cos(t), 1.5 * std::sin(t), 0.0);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    // second triangle deliberately wound the other way
    mesh.triangles.push_back({2 * i, 2 * i + 1, 2 * j});
    mesh.triangles.push_back({2 * j + 1, 2 * j, 2 * i + 1});
  }
  return one_component(mesh);
}

}  // namespace

TEST_CASE("single triangle") {
  Mesh m;
  m.dim = 3;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  m = one_component(m);
  const auto b = check_boundary(m);
  CHECK(b.has_boundary);
  CHECK(b.edges.size() == 3);
  CHECK(check_orientability(m));
  CHECK(euler_characteristic(m) == 1);
  CHECK(connected_components(m) == 1);
}

TEST_CASE("mobius band is not orientable") {
  const auto m = mobius(24);
  CHECK_FALSE(check_orientability(m));
  CHECK(euler_characteristic(m) == 0);
  CHECK(check_boundary(m).has_boundary);
}

TEST_CASE("annulus can be oriented consistently") {
  auto m = annulus(16);
  CHECK(check_orientability(m));
  CHECK(orient_consistently(m));
  // after orientation every interior edge is used once in each direction
  std::map<std::pair<std::size_t, std::size_t>, int> directed;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
  }
  for (const auto& [e, n] : directed) CHECK(n == 1);
  CHECK(euler_characteristic(m) == 0);
  CHECK(check_injectivity(m).injective);
}

TEST_CASE("crossing polyline is not injective") {
  Mesh m;
  m.dim = 2;
  m.vertices = {{0, 0, 0}, {2, 2, 0}, {2, 0, 0}, {0, 2, 0}};
  m.segments = {{0, 1}, {1, 2}, {2, 3}};
  m = one_component(m);
  const auto r = check_injectivity(m);
  CHECK_FALSE(r.injective);
  REQUIRE(r.intersections.size() == 1);
  CHECK(r.intersections[0] == std::pair<std::size_t, std::size_t>{0, 2});
  const auto b = check_boundary(m);
  CHECK(b.vertices == std::vector<std::size_t>{0, 3});
}

TEST_CASE("closed polygon has no boundary") {
  Mesh m;
  m.dim = 2;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.segments = {{0, 1}, {1, 2}, {2, 0}};
  m = one_component(m);
  CHECK_FALSE(check_boundary(m).has_boundary);
  CHECK(euler_characteristic(m) == 0);
  CHECK(m.distance_to(Eigen::Vector3d(0.5, -1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("compactness") {
  CHECK(check_compactness(false, true));
  CHECK_FALSE(check_compactness(true, true));
  CHECK_FALSE(check_compactness(false, false));
}

TEST_CASE("R^4 assembly lists mesh properties as not verified") {
  std::vector<Vector> pts;
  for (int i = 0; i < 6; ++i) {
    Vector p = Vector::Zero(4);
    p(i % 4) = 1.0 + 0.1 * i;
    p((i + 1) % 4) = 0.3 * i;
    pts.push_back(p);
  }
  const PointCloud cloud(pts);
  const auto r = build_hypersurface(cloud, {});
  CHECK_FALSE(r.surface.mesh);
  CHECK_FALSE(r.properties.injective);
  CHECK_FALSE(r.properties.orientable);
  CHECK(r.properties.local_dimension == 3);
  CHECK(r.properties.bounded);
  CHECK(r.properties.not_verified.size() >= 3);
  try {
    check_boundary(r.surface);
    FAIL("expected NoMesh");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoMesh);
  }
}

TEST_CASE("planar assembly report") {
  const PointCloud cloud({Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)});
  RunConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta = 1e-3;
  const auto r = build_hypersurface(cloud, cfg);
  const auto& p = r.properties;
  CHECK(p.has_boundary == true);
  CHECK(p.orientable == true);
  CHECK(p.injective == true);
  CHECK(p.bounded);
  CHECK(p.compact == false);
  CHECK(p.local_dimension == 1);
  CHECK(p.connected_components == 1u);
  CHECK(p.max_membership_distance.value() <= 1e-9 * p.bounding_radius.value());
  CHECK(meets_construction_claims(p, Closure::Loop));
  CHECK_FALSE(meets_construction_claims(p, Closure::Infinity));
}
