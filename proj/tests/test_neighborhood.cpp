#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oscul/error.hpp"
#include "oscul/io.hpp"
#include "oscul/neighborhood.hpp"

using namespace oscul;

namespace {

Vector v2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

PointCloud random_cloud(std::uint64_t seed, std::size_t n, Eigen::Index d) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Vector p(d);
    for (Eigen::Index k = 0; k < d; ++k) p(k) = u(rng);
    pts.push_back(p);
  }
  return PointCloud(pts);
}

}  // namespace

TEST_CASE("knn of the triangle") {
  const PointCloud c({v2(0, 0), v2(0, 1), v2(1, 0)});
  const auto g = knn(c);
  CHECK(g.k == 2);
  CHECK(g.neighbor_indices[0] == std::vector<std::size_t>{1, 2});  // tie broken by index
  CHECK(g.distances[0] == std::vector<double>{1.0, 1.0});
  CHECK(g.neighbor_indices[1] == std::vector<std::size_t>{0, 2});
}

TEST_CASE("knn matches a brute-force sort") {
  const auto c = random_cloud(5, 40, 3);
  const auto g = knn(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j != i) all.emplace_back((c[i] - c[j]).norm(), j);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(g.neighbor_indices[i][k] == all[k].second);
      CHECK(g.distances[i][k] == doctest::Approx(all[k].first));
    }
  }
}

TEST_CASE("knn needs n > d") {
  const PointCloud c({v2(0, 0), v2(1, 0)});
  CHECK_THROWS_AS(knn(c), Error);
}

TEST_CASE("path visits every point once and starts lexicographically smallest") {
  const auto c = random_cloud(9, 30, 2);
  const auto plan = select_path(c, Closure::Loop);
  std::set<std::size_t> seen(plan.order.begin(), plan.order.end());
  CHECK(seen.size() == c.size());
  CHECK(plan.edges.size() == c.size() - 1);
  CHECK(count_path_crossings(c, plan.order) == 0);
  CHECK(plan.boundary_a == plan.order.front());
  CHECK(plan.boundary_b == plan.order.back());
  CHECK_FALSE(plan.infinity_direction);
}

TEST_CASE("infinity plan points away from the centroid") {
  const auto c = random_cloud(11, 20, 2);
  const auto plan = select_path(c, Closure::Infinity);
  REQUIRE(plan.infinity_direction);
  CHECK(plan.infinity_direction->norm() == doctest::Approx(1.0));
  const Vector ctr = c.centroid();
  const double da = (c[plan.boundary_a] - ctr).norm();
  const double db = (c[plan.boundary_b] - ctr).norm();
  const Vector far = da >= db ? c[plan.boundary_a] : c[plan.boundary_b];
  CHECK((*plan.infinity_direction - (far - ctr).normalized()).norm() < 1e-12);
}

TEST_CASE("greedy path on the crossing fixture needs 2-opt") {
  const auto c = io::read_points(std::filesystem::path(OSCUL_TEST_DATA) / "crossing.csv");
  PathOptions none;
  none.move_budget = 0;
  try {
    select_path(c, Closure::Loop, none);
    FAIL("expected PathNotSimple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PathNotSimple);
  }
  const auto plan = select_path(c, Closure::Loop);
  CHECK(plan.moves_applied > 0);
  CHECK(count_path_crossings(c, plan.order) == 0);
}

TEST_CASE("path in R^3 is deterministic per seed") {
  const auto c = random_cloud(13, 25, 3);
  PathOptions a;
  a.seed = 7;
  CHECK(select_path(c, Closure::Loop, a).order == select_path(c, Closure::Loop, a).order);
}
