#include "spectone/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectone/comparison.hpp"
#include "spectone/errors.hpp"
#include "spectone/generators.hpp"
#include "spectone/harness.hpp"
#include "spectone/mesh.hpp"
#include "spectone/off_io.hpp"
#include "spectone/report_io.hpp"
#include "spectone/spectral.hpp"

namespace spectone::cli {

namespace {

struct RunConfig {
  // profile
  double a = 0.0;
  double b = 0.0;
  double r = 1.0;
  int m = 2;
  int ell = 0;
  double sup_h = 0.0;
  double r_i = 0.0;
  bool has_r_i = false;

  std::string input;
  std::string output;
  std::string format = "csv";
  std::vector<double> center{0.0, 0.0, 0.0};
  std::vector<double> radii;
  int k = 1;
  int trials = 100;
  std::uint64_t seed = 1;

  std::string generator;
  harness::GeneratorSpec spec;
};

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

comparison::ComparisonProfile profile_of(const RunConfig& c) {
  comparison::ComparisonProfile p;
  p.curvature = {c.a, c.b};
  p.r = c.r;
  p.m = c.m;
  p.ell = c.ell;
  p.sup_h = c.sup_h;
  comparison::validate(p);
  return p;
}

mesh::Point center_of(const RunConfig& c) { return {c.center[0], c.center[1], c.center[2]}; }

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw ParseError("cannot open '" + c.output + "' for writing");
  file << text;
  if (!file) throw ParseError("failed writing '" + c.output + "'");
}

harness::GeneratorSpec spec_of(const RunConfig& c) {
  harness::GeneratorSpec spec = c.spec;
  spec.kind = harness::parse_generator_kind(c.generator);
  spec.ball_radius = c.r;
  spec.center = center_of(c);
  return spec;
}

// Surface from --input (an OFF in the ball of radius --r about --center) or
// from --generator.
mesh::ImmersedSurface load_surface(const RunConfig& c, std::string& name) {
  if (!c.input.empty()) {
    name = c.input;
    std::optional<Eigen::Vector3d> axis;
    if (c.ell == 1) axis = Eigen::Vector3d::UnitZ();
    return mesh::ImmersedSurface(mesh::read_off_file(c.input), center_of(c), c.r, axis);
  }
  if (c.generator.empty()) throw ParseError("either --input or --generator is required");
  harness::GeneratorSpec spec = spec_of(c);
  if (spec.kind == harness::GeneratorKind::kFlatDisk && spec.conforming_radii.empty()) {
    spec.conforming_radii = c.radii;
    if (c.has_r_i) spec.conforming_radii.push_back(c.r_i);
  }
  harness::GeneratedSurface g = harness::generate(spec);
  name = g.name;
  return std::move(g.surface);
}

int cmd_bound(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const comparison::ExteriorBound bound = comparison::exterior_tone_bound(profile_of(c), c.r_i);
  if (!bound.admissible) {
    err << "warning: sup_h >= (m - ell) C_b(r) = " << fmt12(bound.threshold)
        << "; the mean-curvature hypothesis fails and the value is not a lower bound\n";
  }
  out << fmt12(bound.value) << '\n';
  return kOk;
}

int cmd_threshold(const RunConfig& c, std::ostream& out) {
  if (c.b > 0.0 && !(c.r < comparison::convexity_radius(c.b))) {
    throw DomainError("r >= pi/(2 sqrt(b)): the ball radius must satisfy r < pi/(2 sqrt(b))");
  }
  out << fmt12(comparison::threshold(c.m, c.ell, c.b, c.r)) << '\n';
  return kOk;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  const harness::GeneratedSurface g = harness::generate(spec_of(c));
  mesh::write_off_file(c.output, g.surface.mesh());
  out << g.name << ": " << g.surface.mesh().vertex_count() << " vertices, "
      << g.surface.mesh().face_count() << " faces, max edge "
      << fmt12(g.surface.mesh().max_edge_length());
  if (g.exact_sup_h) out << ", exact |H| " << fmt12(*g.exact_sup_h);
  out << '\n';
  return kOk;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const io::Format format = io::parse_format(c.format);
  mesh::TriMesh tri = mesh::read_off_file(c.input);
  spectral::SpectralResult result;
  if (c.has_r_i) {
    const mesh::ImmersedSurface surface(std::move(tri), center_of(c), c.r);
    const mesh::ExteriorRegion region = mesh::exterior_region(surface, c.r_i);
    const mesh::DiscreteLaplacian lap = mesh::assemble_laplacian(region.surface.mesh());
    result = spectral::dirichlet_tone(lap, region.dirichlet, c.k);
  } else {
    const mesh::DiscreteLaplacian lap = mesh::assemble_laplacian(tri);
    result = spectral::dirichlet_tone(lap, tri.boundary_vertices(), c.k);
  }
  emit(c, io::serialize_spectrum(result, format), out);
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const io::Format format = io::parse_format(c.format);
  const comparison::ComparisonProfile profile = profile_of(c);
  std::string name;
  const mesh::ImmersedSurface surface = load_surface(c, name);
  const harness::SweepReport report = harness::exhaustion_sweep(surface, profile, c.radii, name);
  emit(c, io::serialize_report(report, format), out);
  return kOk;
}

int cmd_barta(const RunConfig& c, std::ostream& out) {
  const io::Format format = io::parse_format(c.format);
  const comparison::ComparisonProfile profile = profile_of(c);
  std::string name;
  const mesh::ImmersedSurface surface = load_surface(c, name);
  harness::DirichletPolicy policy;
  if (c.has_r_i) policy.exterior_radius = c.r_i;
  const harness::BartaSummary summary =
      harness::barta_campaign(surface, profile, policy, c.trials, c.seed);
  emit(c, io::serialize_barta(summary, format), out);
  return kOk;
}

int cmd_check_mesh(const RunConfig& c, std::ostream& out) {
  const mesh::TriMesh tri = mesh::read_off_file(c.input);
  const mesh::DiscreteLaplacian lap = mesh::assemble_laplacian(tri);
  out << "vertices " << tri.vertex_count() << '\n'
      << "faces " << tri.face_count() << '\n'
      << "boundary_vertices " << tri.boundary_vertices().size() << '\n'
      << "total_area " << fmt12(tri.total_area()) << '\n'
      << "max_edge " << fmt12(tri.max_edge_length()) << '\n'
      << "obtuse_edges " << lap.positive_off_diagonals << '\n';
  return kOk;
}

void add_profile(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--a", c.a, "lower radial curvature bound");
  cmd->add_option("--b", c.b, "upper radial curvature bound");
  cmd->add_option("--r", c.r, "ball radius");
  cmd->add_option("--m", c.m, "submanifold dimension");
  cmd->add_option("--ell", c.ell, "Euclidean factor dimension");
  cmd->add_option("--sup-h", c.sup_h, "sup of the mean-curvature norm (trace convention)");
}

void add_generator(CLI::App* cmd, RunConfig& c, bool required) {
  auto* opt = cmd->add_option("--generator", c.generator,
                              "flat_disk, spherical_cap, sphere, catenoid_band, enneper_scaled, "
                              "strip_in_cylinder or revolution_accumulating");
  if (required) opt->required();
  auto& s = c.spec;
  cmd->add_option("--resolution", s.resolution, "target max edge length");
  cmd->add_option("--disk-radius", s.disk_radius);
  cmd->add_option("--sphere-radius", s.sphere_radius);
  cmd->add_option("--cap-radius", s.cap_radius);
  cmd->add_option("--subdivisions", s.subdivisions);
  cmd->add_option("--half-width", s.half_width);
  cmd->add_option("--scale", s.scale);
  cmd->add_option("--enneper-radius", s.enneper_radius);
  cmd->add_option("--strip-radius", s.strip_radius);
  cmd->add_option("--length", s.length);
  cmd->add_option("--spiral-rate", s.spiral_rate);
  cmd->add_option("--profile-cap", s.profile_cap);
  cmd->add_option("--conforming", s.conforming_radii, "flat_disk: radii resolved by vertex rings")
      ->delimiter(',');
}

void add_center(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--center", c.center, "ball center x y z")->expected(3);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exterior fundamental-tone bounds and discrete Dirichlet spectra"};
  app.require_subcommand(1);

  auto* bound = app.add_subcommand("bound", "closed-form exterior fundamental-tone bound");
  add_profile(bound, c);
  bound->add_option("--ri", c.r_i, "exhaustion radius")->required();

  auto* thresh = app.add_subcommand("threshold", "mean-curvature threshold (m - ell) C_b(r)");
  thresh->add_option("--m", c.m)->required();
  thresh->add_option("--ell", c.ell);
  thresh->add_option("--b", c.b);
  thresh->add_option("--r", c.r)->required();

  auto* gen = app.add_subcommand("generate", "write a test immersion as OFF");
  add_generator(gen, c, true);
  gen->add_option("--r", c.r, "ball (or cylinder) radius");
  add_center(gen, c);
  gen->add_option("--output", c.output)->required();

  auto* spec = app.add_subcommand("spectrum", "smallest Dirichlet eigenvalues of an OFF mesh");
  spec->add_option("--input", c.input)->required();
  spec->add_option("--k", c.k, "eigenpair count");
  spec->add_option("--ri", c.r_i, "use the exterior region of this radius");
  spec->add_option("--r", c.r);
  add_center(spec, c);
  spec->add_option("--output", c.output);
  spec->add_option("--format", c.format);

  auto* sweep = app.add_subcommand("sweep", "exhaustion sweep report");
  add_profile(sweep, c);
  add_generator(sweep, c, false);
  add_center(sweep, c);
  sweep->add_option("--input", c.input);
  sweep->add_option("--radii", c.radii, "exhaustion radii")->required()->delimiter(',');
  sweep->add_option("--output", c.output);
  sweep->add_option("--format", c.format);

  auto* barta = app.add_subcommand("barta", "Barta verification campaign");
  add_profile(barta, c);
  add_generator(barta, c, false);
  add_center(barta, c);
  barta->add_option("--input", c.input);
  barta->add_option("--ri", c.r_i, "clamp the exterior region of this radius");
  barta->add_option("--trials", c.trials);
  barta->add_option("--seed", c.seed);
  barta->add_option("--output", c.output);
  barta->add_option("--format", c.format);

  auto* check = app.add_subcommand("check-mesh", "validate an OFF mesh");
  check->add_option("--input", c.input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoError;
  }
  for (auto* cmd : {bound, spec, barta}) {
    if (cmd->count("--ri") > 0) c.has_r_i = true;
  }

  try {
    if (*bound) return cmd_bound(c, out, err);
    if (*thresh) return cmd_threshold(c, out);
    if (*gen) return cmd_generate(c, out);
    if (*spec) return cmd_spectrum(c, out);
    if (*sweep) return cmd_sweep(c, out);
    if (*barta) return cmd_barta(c, out);
    if (*check) return cmd_check_mesh(c, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const MeshError& e) {
    err << "error: invalid mesh: " << e.what() << '\n';
    return kIoError;
  }
  return kIoError;
}

}  // namespace spectone::cli
