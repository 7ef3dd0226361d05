#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <regex>

#include "oscul/error.hpp"
#include "oscul/io.hpp"

using namespace oscul;

namespace {

ErrorCode code_of(auto&& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

const PointCloud& triangle() {
  static const PointCloud c = io::parse_points("0,0\n0,1\n1,0\n");
  return c;
}

BuildResult triangle_build() {
  RunConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.delta = 1e-3;
  return build_hypersurface(triangle(), cfg);
}

}  // namespace

TEST_CASE("csv parsing") {
  const auto& c = triangle();
  CHECK(c.size() == 3);
  CHECK(c.dim() == 2);
  CHECK(c[1](1) == 1.0);
  const auto h = io::parse_points("x,y\n0,0\n0,1\n1,0\n");
  CHECK(h.points() == c.points());
  const auto spaced = io::parse_points(" +1.5 , -2e-3\r\n\n3,4\n");
  CHECK(spaced[0](0) == 1.5);
  CHECK(spaced[0](1) == -2e-3);
}

TEST_CASE("csv errors") {
  std::string msg;
  CHECK(code_of([] { io::parse_points("0,0\n1\n"); }, &msg) == ErrorCode::RaggedRows);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(code_of([] { io::parse_points("0,0\n1,abc\n"); }, &msg) == ErrorCode::NonNumericCell);
  CHECK(msg.find("line 2, column 2") != std::string::npos);
  CHECK(code_of([] { io::parse_points(""); }) == ErrorCode::EmptyFile);
  CHECK(code_of([] { io::parse_points("x,y\n"); }) == ErrorCode::EmptyFile);
  CHECK(code_of([] { io::read_points("/nonexistent/points.csv"); }) == ErrorCode::IoFailure);
}

TEST_CASE("report of the triangle run") {
  const auto build = triangle_build();
  const auto profile = radius_profile(triangle(), 1e-2);
  io::Json doc;
  doc["profile"] = io::to_json(profile);
  doc["properties"] = io::to_json(build.properties);
  doc["components"] = io::components_json(build);
  const std::string text = io::dump(doc);
  CHECK(text.find("\"normalized_radius\": 0.7071067811865476") != std::string::npos);
  CHECK(text.find("null") == std::string::npos);
  CHECK(doc["components"]["counts"]["caps"] == 3);
  CHECK(doc["components"]["counts"]["cylinders"] == 2);
  CHECK(doc["components"]["counts"]["strips"] == 1);
}

TEST_CASE("doubles survive a write and re-read") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  io::Json doc = io::Json::array();
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    const double v = u(rng) * std::pow(10.0, i % 40 - 20);
    values.push_back(v);
    doc.push_back(v);
  }
  const auto back = io::Json::parse(io::dump(doc));
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(back[i].get<double>() == values[i]);
}

TEST_CASE("flat profile entries serialize infinity as a string") {
  RadiusProfile p;
  RadiusEntry e;
  e.flat = true;
  e.normalized_radius = INFINITY;
  p.entries.push_back(e);
  const auto j = io::to_json(p);
  CHECK(j[0]["normalized_radius"] == "inf");
}

TEST_CASE("empty optional sections are omitted") {
  LinearityResult r;
  const auto j = io::to_json(r);
  CHECK_FALSE(j.contains("hyperplane"));
  CHECK_FALSE(j.contains("residual"));
  RunConfig c;
  CHECK_FALSE(io::to_json(c).contains("strip_length"));
}

TEST_CASE("svg of the triangle run") {
  const auto build = triangle_build();
  const std::string svg = io::svg_document(build.surface);
  CHECK(count(svg, "<circle") == 3);
  CHECK(count(svg, "<path") == 6);
  CHECK(svg.find("viewBox") != std::string::npos);
}

TEST_CASE("obj of a four point cloud in R^3") {
  const PointCloud c({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                      Eigen::Vector3d(0, 0, 1)});
  const auto build = build_hypersurface(c, {});
  const std::string obj = io::obj_document(build.surface);
  CHECK(count(obj, "\no cap_") == 4);
  CHECK(count(obj, "\no cyl_") == 3);
  CHECK(count(obj, "\no strip_") == 1);
  CHECK(obj.find("f 0 ") == std::string::npos);
}

TEST_CASE("mesh export dimension guard") {
  std::vector<Vector> pts;
  for (int i = 0; i < 7; ++i) {
    Vector p = Vector::Zero(5);
    p(i % 5) = 1.0 + 0.2 * i;
    p((i + 2) % 5) = 0.1 * i;
    pts.push_back(p);
  }
  const auto build = build_hypersurface(PointCloud(pts), {});
  const auto tmp = std::filesystem::temp_directory_path();
  CHECK(code_of([&] { io::export_mesh(build.surface, tmp / "w.svg", io::MeshFormat::Svg); }) ==
        ErrorCode::UnsupportedDimension);
  CHECK(code_of([&] { io::export_mesh(build.surface, tmp / "w.obj", io::MeshFormat::Obj); }) ==
        ErrorCode::UnsupportedDimension);
  CHECK(io::mesh_format_for("a/b.SVG") == io::MeshFormat::Svg);
  CHECK(code_of([] { io::mesh_format_for("a.png"); }) == ErrorCode::InvalidInput);
}
