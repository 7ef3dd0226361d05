#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "oscul/analysis.hpp"
#include "oscul/pipeline.hpp"
#include "oscul/pyramid.hpp"

namespace oscul::io {

using Json = nlohmann::ordered_json;

/// Comma-separated decimal rows, one point per row. A first row with any
/// non-numeric cell is taken as a header. Throws RaggedRows, NonNumericCell
/// (with line and column), EmptyFile or IoFailure.
PointCloud read_points(const std::filesystem::path& path);
PointCloud parse_points(const std::string& text, const std::string& provenance = {});

Json to_json(const RunConfig& config);
Json to_json(const RadiusProfile& profile);
Json to_json(const StructureScore& score);
Json to_json(const LinearityResult& linearity);
Json to_json(const PropertyReport& report);
/// Component inventory of W plus the path it follows.
Json components_json(const BuildResult& build);
Json to_json(const Pyramid& pyramid);

/// Serialized form of a report; doubles use the shortest representation
/// that parses back to the same value, infinity is the string "inf".
std::string dump(const Json& doc);

/// Writes text to path, or to stdout when path is empty or "-".
void write_text(const std::filesystem::path& path, const std::string& text);
void write_report(const Json& doc, const std::filesystem::path& path);

/// Planar W as one <path> per component plus a marker per data point.
std::string svg_document(const Hypersurface& w);
/// Spatial W as a triangle mesh with one object per component.
std::string obj_document(const Hypersurface& w);

enum class MeshFormat { Svg, Obj };

/// From the file extension (.svg or .obj); throws InvalidInput otherwise.
MeshFormat mesh_format_for(const std::filesystem::path& path);

/// Throws UnsupportedDimension unless SVG meets d = 2 or OBJ meets d = 3.
void export_mesh(const Hypersurface& w, const std::filesystem::path& path, MeshFormat format);

}  // namespace oscul::io
