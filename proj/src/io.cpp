#include "oscul/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "oscul/error.hpp"

namespace oscul::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json vec(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string_view closure_name(Closure c) { return c == Closure::Loop ? "loop" : "infinity"; }

}  // namespace

PointCloud parse_points(const std::string& text, const std::string& provenance) {
  std::vector<Vector> points;
  std::size_t width = 0;
  bool first_row = true;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto cells = split_cells(line);
    std::vector<std::optional<double>> values;
    values.reserve(cells.size());
    for (auto c : cells) values.push_back(parse_double(c));
    const bool numeric = std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
    if (first_row) {
      first_row = false;
      width = cells.size();
      if (!numeric) continue;  // header
    }
    if (cells.size() != width) {
      throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                             " columns, expected " + std::to_string(width));
    }
    Vector p(static_cast<Eigen::Index>(width));
    for (std::size_t k = 0; k < width; ++k) {
      if (!values[k]) {
        throw Error(ErrorCode::NonNumericCell, "line " + std::to_string(line_no) + ", column " +
                                                   std::to_string(k + 1) + ": '" + std::string(cells[k]) + "'");
      }
      p(static_cast<Eigen::Index>(k)) = *values[k];
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw Error(ErrorCode::EmptyFile, provenance.empty() ? "no data rows" : provenance + " has no data rows");
  return PointCloud(std::move(points), provenance);
}

PointCloud read_points(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_points(buf.str(), path.string());
}

Json to_json(const RunConfig& c) {
  Json j;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["closure"] = closure_name(c.closure);
  j["mesh_resolution"] = c.mesh_resolution;
  if (c.path_move_budget) j["path_move_budget"] = *c.path_move_budget;
  if (c.strip_length) j["strip_length"] = *c.strip_length;
  j["seed"] = c.seed;
  j["noise_threshold"] = c.noise_threshold;
  return j;
}

Json to_json(const RadiusProfile& profile) {
  Json a = Json::array();
  for (const auto& e : profile.entries) {
    Json j;
    j["index"] = e.index;
    if (e.error) {
      j["error"] = *e.error;
    } else {
      j["flat"] = e.flat;
      j["normalized_radius"] = number(e.normalized_radius);
      j["curvature"] = e.curvature;
    }
    j["neighbor_scale"] = e.neighbor_scale;
    a.push_back(std::move(j));
  }
  return a;
}

Json to_json(const StructureScore& s) {
  Json j;
  j["score"] = s.score;
  j["label"] = s.label == StructureLabel::Structured ? "structured" : "noise-like";
  return j;
}

Json to_json(const LinearityResult& r) {
  Json j;
  j["is_linear"] = r.is_linear;
  j["flat_fraction"] = r.flat_fraction;
  if (r.hyperplane) {
    j["hyperplane"] = {{"normal", vec(r.hyperplane->normal)}, {"offset", r.hyperplane->offset}};
  }
  if (r.residual) j["residual"] = *r.residual;
  return j;
}

Json to_json(const PropertyReport& r) {
  Json j;
  if (r.has_boundary) j["has_boundary"] = *r.has_boundary;
  if (r.orientable) j["orientable"] = *r.orientable;
  if (r.injective) j["injective"] = *r.injective;
  j["bounded"] = r.bounded;
  if (r.bounding_radius) j["bounding_radius"] = *r.bounding_radius;
  if (r.compact) j["compact"] = *r.compact;
  j["local_dimension"] = r.local_dimension;
  if (r.euler_characteristic) j["euler_characteristic"] = *r.euler_characteristic;
  if (r.connected_components) j["connected_components"] = *r.connected_components;
  if (r.max_membership_distance) j["max_membership_distance"] = *r.max_membership_distance;
  if (!r.not_verified.empty()) j["not_verified"] = r.not_verified;
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back({{"property", x.property}, {"location", x.location}});
  j["violations"] = std::move(v);
  return j;
}

Json components_json(const BuildResult& build) {
  const Hypersurface& w = build.surface;
  Json j;
  j["closure"] = closure_name(w.closure);
  j["counts"] = {{"caps", w.caps.size()}, {"cylinders", w.cylinders.size()}, {"strips", w.strips.size()}};
  j["attempts"] = build.attempts;
  j["seed_used"] = build.seed_used;
  Json path;
  path["order"] = w.plan.order;
  path["boundary_a"] = w.plan.boundary_a;
  path["boundary_b"] = w.plan.boundary_b;
  path["moves_applied"] = w.plan.moves_applied;
  if (w.plan.infinity_direction) path["infinity_direction"] = vec(*w.plan.infinity_direction);
  j["path"] = std::move(path);

  Json caps = Json::array();
  for (std::size_t i = 0; i < w.caps.size(); ++i) {
    const HyperCap& c = w.caps[i];
    Json cj;
    cj["index"] = i;
    if (c.sphere.is_flat()) {
      cj["kind"] = "flat";
      cj["normal"] = vec(c.sphere.normal);
      cj["offset"] = c.sphere.offset;
    } else {
      cj["kind"] = "round";
      cj["center"] = vec(c.sphere.center);
      cj["radius"] = c.sphere.radius;
    }
    cj["delta"] = c.delta;
    cj["rim_radius"] = c.rim.radius;
    caps.push_back(std::move(cj));
  }
  j["caps"] = std::move(caps);

  Json cyl = Json::array();
  for (const auto& c : w.cylinders) {
    cyl.push_back({{"cap_i", c.cap_i}, {"cap_j", c.cap_j}, {"rim_point_i", vec(c.rim_point_i)},
                   {"rim_point_j", vec(c.rim_point_j)}});
  }
  j["cylinders"] = std::move(cyl);

  Json strips = Json::array();
  for (const auto& s : w.strips) {
    Json sj;
    sj["kind"] = s.kind == StripKind::ClosingLoop ? "closing_loop" : "to_infinity";
    sj["caps"] = s.caps;
    sj["route_points"] = s.route.size();
    if (s.kind == StripKind::ToInfinity) sj["truncation"] = s.truncation;
    strips.push_back(std::move(sj));
  }
  j["strips"] = std::move(strips);
  if (w.mesh) {
    j["mesh"] = {{"vertices", w.mesh->vertices.size()}, {"elements", w.mesh->element_count()}};
  }
  return j;
}

Json to_json(const Pyramid& pyramid) {
  Json levels = Json::array();
  for (const auto& level : pyramid.levels) {
    Json lj;
    lj["dim"] = level.dim;
    Json pts = Json::array();
    for (const auto& p : level.cloud.points()) pts.push_back(vec(p));
    lj["points"] = std::move(pts);
    if (level.chart) {
      Json frames = Json::array();
      for (std::size_t i = 0; i < level.chart->frames.size(); ++i) {
        Json cols = Json::array();
        const auto& f = level.chart->frames[i];
        for (Eigen::Index c = 0; c < f.cols(); ++c) cols.push_back(vec(f.col(c)));
        frames.push_back({{"index", i}, {"arc_length", level.chart->arc_length[i]}, {"axes", std::move(cols)}});
      }
      lj["chart"] = {{"order", level.chart->order}, {"frames", std::move(frames)}};
    }
    if (level.build) lj["properties"] = to_json(level.build->properties);
    levels.push_back(std::move(lj));
  }
  Json j;
  j["levels"] = std::move(levels);
  return j;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoFailure, "cannot write to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

void write_report(const Json& doc, const std::filesystem::path& path) { write_text(path, dump(doc)); }

std::string svg_document(const Hypersurface& w) {
  if (w.dim != 2 || !w.mesh) throw Error(ErrorCode::UnsupportedDimension, "SVG export needs d = 2");
  const Mesh& m = *w.mesh;
  const Eigen::Vector2d c(w.ball.center(0), w.ball.center(1));
  double reach = 0.0;
  for (const auto& v : m.vertices) reach = std::max(reach, (v.head<2>() - c).norm());
  const double half = 1.1 * std::max(reach, 1e-12);
  const double size = 2.0 * half;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(c.x() - half) << ' ' << fmt(-c.y() - half)
     << ' ' << fmt(size) << ' ' << fmt(size) << "\">\n";
  os << "<g fill=\"none\" stroke=\"black\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\">\n";
  for (const auto& comp : m.components) {
    if (comp.element_count == 0) continue;
    os << "<path id=\"" << comp.label << "\" class=\"" << to_string(comp.kind) << "\" vector-effect=\"non-scaling-stroke\" d=\"";
    std::size_t last = SIZE_MAX;
    for (std::size_t e = comp.first_element; e < comp.first_element + comp.element_count; ++e) {
      const auto& s = m.segments[e];
      if (s[0] != last) os << 'M' << fmt(m.vertices[s[0]].x()) << ',' << fmt(-m.vertices[s[0]].y()) << ' ';
      os << 'L' << fmt(m.vertices[s[1]].x()) << ',' << fmt(-m.vertices[s[1]].y()) << ' ';
      last = s[1];
    }
    os << "\"/>\n";
  }
  os << "</g>\n<g fill=\"red\">\n";
  const double r = 0.005 * size;
  for (std::size_t i = 0; i < w.caps.size(); ++i) {
    const auto& a = w.caps[i].apex;
    os << "<circle id=\"point_" << i << "\" cx=\"" << fmt(a(0)) << "\" cy=\"" << fmt(-a(1)) << "\" r=\"" << fmt(r)
       << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string obj_document(const Hypersurface& w) {
  if (w.dim != 3 || !w.mesh) throw Error(ErrorCode::UnsupportedDimension, "OBJ export needs d = 3");
  const Mesh& m = *w.mesh;
  std::ostringstream os;
  for (const auto& v : m.vertices) os << "v " << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
  for (const auto& comp : m.components) {
    os << "o " << comp.label << '\n';
    for (std::size_t e = comp.first_element; e < comp.first_element + comp.element_count; ++e) {
      const auto& t = m.triangles[e];
      os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
  }
  return os.str();
}

MeshFormat mesh_format_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == ".svg") return MeshFormat::Svg;
  if (ext == ".obj") return MeshFormat::Obj;
  throw Error(ErrorCode::InvalidInput, "mesh file must end in .svg or .obj: " + path.string());
}

void export_mesh(const Hypersurface& w, const std::filesystem::path& path, MeshFormat format) {
  if (format == MeshFormat::Svg) {
    if (w.dim != 2) throw Error(ErrorCode::UnsupportedDimension, "SVG export needs d = 2, got d = " + std::to_string(w.dim));
    write_text(path, svg_document(w));
  } else {
    if (w.dim != 3) throw Error(ErrorCode::UnsupportedDimension, "OBJ export needs d = 3, got d = " + std::to_string(w.dim));
    write_text(path, obj_document(w));
  }
}

}  // namespace oscul::io
