#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oscul/analysis.hpp"
#include "oscul/error.hpp"
#include "oscul/io.hpp"
#include "oscul/pipeline.hpp"
#include "oscul/pyramid.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerification = 2;

struct Options {
  std::string input;
  std::string output = "-";
  std::string mesh;
  std::string closure = "loop";
  std::size_t target_dim = 0;
  std::optional<std::size_t> path_move_budget;
  std::optional<double> strip_length;
  oscul::RunConfig config;
};

int exit_code_for(oscul::ErrorCode code) {
  switch (code) {
    case oscul::ErrorCode::PathNotSimple:
    case oscul::ErrorCode::RoutingFailed:
    case oscul::ErrorCode::CapsOverlap:
      return kExitVerification;
    default:
      return kExitInput;
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--input,-i", o.input, "CSV file, one point per row");
  cmd->add_option("--output,-o", o.output, "JSON report path, '-' for stdout");
  cmd->add_option("--epsilon", o.config.epsilon, "contraction factor for the osculating fit");
  cmd->add_option("--seed", o.config.seed, "seed for path selection");
}

void add_build(CLI::App* cmd, Options& o) {
  cmd->add_option("--delta", o.config.delta, "cap size, clamped to epsilon");
  cmd->add_option("--closure", o.closure, "loop or infinity")->check(CLI::IsMember({"loop", "infinity"}));
  cmd->add_option("--mesh-resolution", o.config.mesh_resolution, "samples per cap arc");
  cmd->add_option("--path-move-budget", o.path_move_budget, "maximum 2-opt moves");
  cmd->add_option("--strip-length", o.strip_length, "truncation length of the rays to infinity");
}

oscul::io::Json base_report(const Options& o) {
  oscul::io::Json doc;
  doc["config"] = oscul::io::to_json(o.config);
  return doc;
}

int run_fit(const Options& o) {
  const oscul::PointCloud cloud = oscul::io::read_points(o.input);
  oscul::io::Json doc = base_report(o);
  doc["profile"] = oscul::io::to_json(oscul::radius_profile(cloud, o.config.epsilon));
  oscul::io::write_report(doc, o.output);
  return kExitOk;
}

int run_analyze(const Options& o) {
  const oscul::PointCloud cloud = oscul::io::read_points(o.input);
  const oscul::RadiusProfile profile = oscul::radius_profile(cloud, o.config.epsilon);
  oscul::io::Json doc = base_report(o);
  doc["profile"] = oscul::io::to_json(profile);
  doc["structure"] = oscul::io::to_json(oscul::structure_score(profile, o.config.noise_threshold));
  doc["linearity"] = oscul::io::to_json(oscul::linearity_detect(cloud, profile));
  oscul::io::write_report(doc, o.output);
  return kExitOk;
}

int run_assemble(const Options& o) {
  const oscul::PointCloud cloud = oscul::io::read_points(o.input);
  std::optional<oscul::io::MeshFormat> format;
  if (!o.mesh.empty()) format = oscul::io::mesh_format_for(o.mesh);

  const oscul::RadiusProfile profile = oscul::radius_profile(cloud, o.config.epsilon);
  const oscul::BuildResult build = oscul::build_hypersurface(cloud, o.config);
  oscul::io::Json doc = base_report(o);
  doc["profile"] = oscul::io::to_json(profile);
  doc["structure"] = oscul::io::to_json(oscul::structure_score(profile, o.config.noise_threshold));
  doc["linearity"] = oscul::io::to_json(oscul::linearity_detect(cloud, profile));
  doc["properties"] = oscul::io::to_json(build.properties);
  doc["components"] = oscul::io::components_json(build);
  oscul::io::write_report(doc, o.output);
  if (format) oscul::io::export_mesh(build.surface, o.mesh, *format);

  if (!oscul::meets_construction_claims(build.properties, o.config.closure)) {
    for (const auto& v : build.properties.violations) {
      std::cerr << "violation: " << v.property << " at " << v.location << '\n';
    }
    return kExitVerification;
  }
  return kExitOk;
}

int run_pyramid(const Options& o) {
  const oscul::PointCloud cloud = oscul::io::read_points(o.input);
  const oscul::Pyramid pyr = oscul::induct(cloud, o.target_dim, o.config);
  oscul::io::Json doc = base_report(o);
  doc["pyramid"] = oscul::io::to_json(pyr);
  oscul::io::write_report(doc, o.output);
  for (const auto& level : pyr.levels) {
    if (level.build && !oscul::meets_construction_claims(level.build->properties, o.config.closure)) {
      std::cerr << "level of dim " << level.dim << " failed verification\n";
      return kExitVerification;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypersurface through a point cloud from osculating hyperspheres"};
  app.require_subcommand(1);
  Options o;

  CLI::App* fit = app.add_subcommand("fit", "radius profile and curvature per point");
  add_common(fit, o);
  CLI::App* analyze = app.add_subcommand("analyze", "structure and linearity diagnostics");
  add_common(analyze, o);
  analyze->add_option("--noise-threshold", o.config.noise_threshold, "structure score below which data is noise-like");
  CLI::App* assemble = app.add_subcommand("assemble", "build and verify the hypersurface");
  add_common(assemble, o);
  add_build(assemble, o);
  assemble->add_option("--mesh", o.mesh, "mesh output, .svg for d = 2 or .obj for d = 3");
  assemble->add_option("--noise-threshold", o.config.noise_threshold, "structure score below which data is noise-like");
  CLI::App* pyramid = app.add_subcommand("pyramid", "inductive reduction to a target dimension");
  add_common(pyramid, o);
  add_build(pyramid, o);
  pyramid->add_option("--target-dim", o.target_dim, "dimension to stop at")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  CLI::App* cmd = app.get_subcommands().front();
  if (o.input.empty()) {
    std::cerr << "error: --input is required\n\n" << cmd->help();
    return kExitInput;
  }

  try {
    o.config.closure = o.closure == "infinity" ? oscul::Closure::Infinity : oscul::Closure::Loop;
    o.config.path_move_budget = o.path_move_budget;
    o.config.strip_length = o.strip_length;
    o.config.normalize();
    if (cmd == fit) return run_fit(o);
    if (cmd == analyze) return run_analyze(o);
    if (cmd == assemble) return run_assemble(o);
    return run_pyramid(o);
  } catch (const oscul::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
