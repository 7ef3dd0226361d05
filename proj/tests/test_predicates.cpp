#include <doctest.h>

#include "oscul/predicates.hpp"

using namespace oscul::predicates;

TEST_CASE("orient2d sign") {
  CHECK(orient2d(P2(0, 0), P2(1, 0), P2(0, 1)) > 0);
  CHECK(orient2d(P2(0, 0), P2(0, 1), P2(1, 0)) < 0);
  CHECK(orient2d(P2(0, 0), P2(1, 1), P2(2, 2)) == 0);
}

TEST_CASE("closed segment intersection") {
  CHECK(segments_intersect(P2(0, 0), P2(2, 2), P2(0, 2), P2(2, 0)));
  CHECK_FALSE(segments_intersect(P2(0, 0), P2(1, 0), P2(0, 1), P2(1, 1)));
  CHECK(segments_intersect(P2(0, 0), P2(1, 0), P2(1, 0), P2(2, 5)));    // touching end
  CHECK(segments_intersect(P2(0, 0), P2(2, 0), P2(1, 0), P2(3, 0)));    // collinear overlap
  CHECK_FALSE(segments_intersect(P2(0, 0), P2(1, 0), P2(2, 0), P2(3, 0)));
}

TEST_CASE("distances") {
  CHECK(point_segment_distance(P3(0, 1, 0), P3(-1, 0, 0), P3(1, 0, 0)) == doctest::Approx(1.0));
  CHECK(point_segment_distance(P3(3, 0, 0), P3(-1, 0, 0), P3(1, 0, 0)) == doctest::Approx(2.0));
  const P3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  CHECK(point_triangle_distance(P3(0.2, 0.2, 0.5), a, b, c) == doctest::Approx(0.5));
  CHECK(point_triangle_distance(P3(2, 0, 0), a, b, c) == doctest::Approx(1.0));
}

TEST_CASE("triangle-triangle intersection") {
  const P3 a0(0, 0, 0), a1(1, 0, 0), a2(0, 1, 0);
  CHECK(triangles_intersect(a0, a1, a2, P3(0.2, 0.2, -1), P3(0.2, 0.2, 1), P3(0.3, 0.3, 1), 1e-12));
  CHECK_FALSE(triangles_intersect(a0, a1, a2, P3(0, 0, 1), P3(1, 0, 1), P3(0, 1, 1), 1e-12));
  // coplanar overlap and coplanar separation
  CHECK(triangles_intersect(a0, a1, a2, P3(0.5, 0.5, 0), P3(-0.5, 0.2, 0), P3(0.2, -0.5, 0), 1e-12));
  CHECK_FALSE(triangles_intersect(a0, a1, a2, P3(2, 2, 0), P3(3, 2, 0), P3(2, 3, 0), 1e-12));
}

TEST_CASE("segment-triangle intersection") {
  const P3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  CHECK(segment_triangle_intersect(P3(0.2, 0.2, -1), P3(0.2, 0.2, 1), a, b, c, 1e-12));
  CHECK_FALSE(segment_triangle_intersect(P3(2, 2, -1), P3(2, 2, 1), a, b, c, 1e-12));
  CHECK_FALSE(segment_triangle_intersect(P3(0.2, 0.2, 0.5), P3(0.2, 0.2, 1), a, b, c, 1e-12));
  CHECK(segment_triangle_intersect(P3(-1, 0.2, 0), P3(1, 0.2, 0), a, b, c, 1e-12));
}
