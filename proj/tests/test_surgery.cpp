#include <doctest.h>

#include <cmath>

#include <Eigen/LU>

#include "oscul/error.hpp"
#include "oscul/neighborhood.hpp"
#include "oscul/pipeline.hpp"
#include "oscul/surgery.hpp"

using namespace oscul;

namespace {

Vector v2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Vector v3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

GeneralizedSphere unit_circle_at(const Vector& apex) {
  return GeneralizedSphere::round(Vector::Zero(2), 1.0, apex);
}

}  // namespace

TEST_CASE("rim points lie on the sphere at distance delta from the apex") {
  const auto s = GeneralizedSphere::round(v3(0, 0, 0), 2.0, v3(0, 0, 2));
  const auto cap = cut_cap(s, s.apex, 0.5);
  const double h = 0.25 / (2 * 2.0);
  CHECK(cap.rim.radius == doctest::Approx(std::sqrt(0.25 - h * h)));
  for (const auto& dir : {v3(1, 0, 0), v3(0, 1, 0), v3(0.6, 0.8, 0)}) {
    const Vector p = cap.rim.point(cap.rim.basis * (cap.rim.basis.transpose() * dir).normalized());
    CHECK((p - s.apex).norm() == doctest::Approx(0.5));
    CHECK(p.norm() == doctest::Approx(2.0));
  }
}

TEST_CASE("planar rim points and nearest attachment") {
  const auto s = unit_circle_at(v2(0, 1));
  const auto cap = cut_cap(s, s.apex, 0.2);
  const auto pts = rim_points_2d(cap);
  for (const auto& p : pts) {
    CHECK(p.norm() == doctest::Approx(1.0));
    CHECK((p - s.apex).norm() == doctest::Approx(0.2));
  }
  CHECK(pts[0](0) < pts[1](0));
  const Vector near = cap.nearest_rim_point(v2(5, 1));
  CHECK((near - pts[1]).norm() < 1e-12);
}

TEST_CASE("flat caps have a straight rim") {
  const auto s = GeneralizedSphere::flat(v2(0, 1), 0.0, v2(0, 0));
  const auto cap = cut_cap(s, s.apex, 0.1);
  const auto pts = rim_points_2d(cap);
  CHECK((pts[0] - v2(-0.1, 0)).norm() < 1e-15);
  CHECK((pts[1] - v2(0.1, 0)).norm() < 1e-15);
}

TEST_CASE("cap errors") {
  const auto s = unit_circle_at(v2(0, 1));
  CHECK(code_of([&] { cut_cap(s, s.apex, 2.5); }) == ErrorCode::DeltaTooLarge);
  CHECK(code_of([&] { cut_cap(s, s.apex, 0.3, 0.1); }) == ErrorCode::DeltaTooLarge);
  CHECK(code_of([&] { cut_cap(s, v2(0, 1.5), 0.1); }) == ErrorCode::ApexNotOnSphere);
}

TEST_CASE("hyperplane cut of the origin circle") {
  const double eps = 1e-2, delta = 1e-3;
  const auto s = GeneralizedSphere::round(v2(eps / 2, eps / 2), eps / std::sqrt(2.0), v2(0, 0));
  const auto pts = hyperplane_cut_point(s, 1, delta);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0](0) == doctest::Approx((eps - std::sqrt(eps * eps - 4 * delta * delta + 4 * eps * delta)) / 2));
  CHECK(pts[1](0) == doctest::Approx((eps + std::sqrt(eps * eps - 4 * delta * delta + 4 * eps * delta)) / 2));
  CHECK(pts[0](1) == delta);
  CHECK(code_of([&] { hyperplane_cut_point(s, 1, 1.0); }) == ErrorCode::NoIntersection);
}

TEST_CASE("cylinder between two planar caps") {
  const auto a = cut_cap(GeneralizedSphere::round(v2(0, 1), 1.0, v2(0, 0)), v2(0, 0), 0.1);
  const auto b = cut_cap(GeneralizedSphere::round(v2(4, 1), 1.0, v2(4, 0)), v2(4, 0), 0.1);
  const auto cyl = connect_cylinder(a, b, 0, 1);
  CHECK(cyl.rim_point_i(0) > 0.0);
  CHECK(cyl.rim_point_j(0) < 4.0);
  const auto [a1, a2] = line_coefficients(cyl);
  // 2x2 system through both endpoints, solved independently
  Eigen::Matrix2d m;
  m << cyl.rim_point_i(0), 1, cyl.rim_point_j(0), 1;
  const Eigen::Vector2d sol = m.fullPivLu().solve(Eigen::Vector2d(cyl.rim_point_i(1), cyl.rim_point_j(1)));
  CHECK(a1 == doctest::Approx(sol(0)));
  CHECK(a2 == doctest::Approx(sol(1)));

  const auto c = cut_cap(GeneralizedSphere::round(v2(0.15, 1), 1.0, v2(0.15, 0)), v2(0.15, 0), 0.1);
  CHECK(code_of([&] { connect_cylinder(a, c, 0, 2); }) == ErrorCode::CapsOverlap);
}

TEST_CASE("middle planar caps give each neighbor its own rim point") {
  const PointCloud cloud({v2(0, 0), v2(1, 0.1), v2(2, 0)});
  std::vector<HyperCap> caps;
  for (std::size_t i = 0; i < 3; ++i) {
    caps.push_back(cut_cap(GeneralizedSphere::flat(v2(0, 1), cloud[i](1), cloud[i]), cloud[i], 0.05));
  }
  ConnectionPlan plan;
  plan.order = {0, 1, 2};
  plan.edges = {{0, 1}, {1, 2}};
  plan.boundary_a = 0;
  plan.boundary_b = 2;
  const auto cyl = connect_path(caps, plan);
  REQUIRE(cyl.size() == 2);
  CHECK((cyl[0].rim_point_j - cyl[1].rim_point_i).norm() > 0.05);
}

TEST_CASE("assemble rejects mismatched components") {
  const PointCloud cloud({v2(0, 0), v2(0, 1), v2(1, 0)});
  RunConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta = 1e-3;
  const auto r = build_hypersurface(cloud, cfg);
  const auto& w = r.surface;
  CHECK(w.component_count() == 6);
  CHECK(code_of([&] { assemble(w.caps, {}, w.strips, w.plan, w.options); }) == ErrorCode::ComponentMismatch);
  auto two = w.strips;
  two.push_back(two.front());
  CHECK(code_of([&] { assemble(w.caps, w.cylinders, two, w.plan, w.options); }) == ErrorCode::ComponentMismatch);
  const auto again = assemble(w.caps, w.cylinders, w.strips, w.plan, w.options);
  REQUIRE(again.mesh);
  CHECK(again.mesh->components.size() == 6);
}

TEST_CASE("infinity strips reach the truncation length") {
  const PointCloud cloud({v2(0, 0), v2(0, 1), v2(1, 0), v2(1.2, 1.1)});
  RunConfig cfg;
  cfg.closure = Closure::Infinity;
  cfg.strip_length = 5.0;
  const auto r = build_hypersurface(cloud, cfg);
  const auto& w = r.surface;
  REQUIRE(w.strips.size() == 2);
  for (const auto& s : w.strips) {
    CHECK(s.kind == StripKind::ToInfinity);
    CHECK(s.truncation == 5.0);
    CHECK((s.route.back() - w.ball.center).norm() > w.ball.radius + 4.0);
  }
}
