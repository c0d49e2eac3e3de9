#include <cmath>
#include <string>

#include <doctest.h>

#include "oracles.hpp"
#include "spectone/errors.hpp"
#include "spectone/generators.hpp"
#include "spectone/harness.hpp"
#include "spectone/mesh.hpp"

using namespace spectone::harness;
using spectone::DomainError;
using spectone::comparison::ComparisonProfile;
using spectone::mesh::assemble_laplacian;
using spectone::mesh::Face;
using spectone::mesh::Point;

namespace {

const GeneratorKind kAll[] = {GeneratorKind::kFlatDisk,       GeneratorKind::kSphericalCap,
                              GeneratorKind::kSphere,         GeneratorKind::kCatenoidBand,
                              GeneratorKind::kEnneperScaled,  GeneratorKind::kStripInCylinder,
                              GeneratorKind::kRevolutionAccumulating};

GeneratedSurface make(GeneratorKind kind, double resolution = 0.05) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.resolution = resolution;
  return generate(spec);
}

ComparisonProfile profile_for(const GeneratedSurface& g) {
  ComparisonProfile p;
  p.r = g.surface.radius();
  p.ell = g.ell;
  return p;
}

}  // namespace

TEST_CASE("generator names round-trip") {
  for (GeneratorKind kind : kAll) CHECK(parse_generator_kind(to_string(kind)) == kind);
  CHECK(to_string(GeneratorKind::kStripInCylinder) == "strip_in_cylinder");
  CHECK_THROWS_AS(parse_generator_kind("torus"), DomainError);
}

TEST_CASE("every generator yields a valid contained mesh at its resolution") {
  for (GeneratorKind kind : kAll) {
    CAPTURE(std::string(to_string(kind)));
    const GeneratedSurface g = make(kind);
    const auto& mesh = g.surface.mesh();
    CHECK(mesh.face_count() > 0);
    CHECK(mesh.max_edge_length() <= 0.05 * 1.001);
    const double r = g.surface.radius();
    for (const Point& x : mesh.vertices()) CHECK(g.surface.distance(x) <= r * (1.0 - 1e-6));
    CHECK(g.name == to_string(kind));
  }
}

TEST_CASE("analytic metadata") {
  CHECK(make(GeneratorKind::kFlatDisk).exact_sup_h == 0.0);
  CHECK(make(GeneratorKind::kCatenoidBand).exact_sup_h == 0.0);
  CHECK(make(GeneratorKind::kEnneperScaled).exact_sup_h == 0.0);
  CHECK(make(GeneratorKind::kStripInCylinder).exact_sup_h == 0.0);
  CHECK(make(GeneratorKind::kSphere).exact_sup_h == doctest::Approx(4.0));
  CHECK(make(GeneratorKind::kSphericalCap).exact_sup_h == doctest::Approx(4.0));
  CHECK_FALSE(make(GeneratorKind::kRevolutionAccumulating).exact_sup_h.has_value());
  CHECK(make(GeneratorKind::kStripInCylinder).ell == 1);
  CHECK(make(GeneratorKind::kFlatDisk).ell == 0);
}

TEST_CASE("generator parameter errors") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kSphericalCap;
  spec.cap_radius = 0.6;  // wider than the sphere of radius 0.5
  CHECK_THROWS_AS(generate(spec), DomainError);
  spec.kind = GeneratorKind::kSphere;
  spec.sphere_radius = 1.0;  // touches the unit ball
  CHECK_THROWS_AS(generate(spec), DomainError);
  spec.kind = GeneratorKind::kFlatDisk;
  spec.disk_radius = 1.0;
  CHECK_THROWS_AS(generate(spec), DomainError);
  spec.kind = GeneratorKind::kCatenoidBand;
  spec.scale = 1.0;  // cosh(1) > 1: leaves the unit ball
  CHECK_THROWS_AS(generate(spec), DomainError);
  spec.kind = GeneratorKind::kStripInCylinder;
  spec.strip_radius = 1.2;
  CHECK_THROWS_AS(generate(spec), DomainError);
}

TEST_CASE("mesh helpers") {
  for (int level : {0, 1, 2, 3}) {
    const auto ico = icosphere(level, 2.0, Point(1, 0, 0));
    CHECK(ico.vertex_count() == 10 * (1 << (2 * level)) + 2);
    CHECK(ico.boundary_vertices().empty());
  }
  const auto grid = square_grid(3, 2.0);
  CHECK(grid.vertex_count() == 16);
  CHECK(grid.face_count() == 18);
  CHECK(grid.total_area() == doctest::Approx(4.0));

  // The long diagonal of a flat kite is not Delaunay and gets flipped.
  std::vector<Point> pts{Point(0, 0, 0), Point(4, 0, 0), Point(2, 0.5, 0), Point(2, -0.5, 0)};
  std::vector<Face> faces{{0, 1, 2}, {1, 0, 3}};
  CHECK(delaunay_flip(pts, faces) == 1);
  CHECK(delaunay_flip(pts, faces) == 0);
  for (const Face& f : faces) {
    const bool has01 = (std::find(f.begin(), f.end(), 0) != f.end()) &&
                       (std::find(f.begin(), f.end(), 1) != f.end());
    CHECK_FALSE(has01);
  }
}

TEST_CASE("admissibility verdicts") {
  const GeneratedSurface disk = make(GeneratorKind::kFlatDisk);
  const AdmissibilityReport flat =
      admissibility(disk.surface, assemble_laplacian(disk.surface.mesh()), profile_for(disk), disk.exact_sup_h);
  CHECK(flat.pass);
  CHECK(flat.margin == doctest::Approx(2.0));

  const GeneratedSurface sphere = make(GeneratorKind::kSphere);
  const AdmissibilityReport round = admissibility(
      sphere.surface, assemble_laplacian(sphere.surface.mesh()), profile_for(sphere), sphere.exact_sup_h);
  CHECK_FALSE(round.pass);
  CHECK(round.margin == doctest::Approx(-2.0));
  CHECK(round.numerical_sup_h == doctest::Approx(4.0).epsilon(0.02));

  GeneratorSpec spec;
  spec.kind = GeneratorKind::kCatenoidBand;
  spec.resolution = 0.02;
  const GeneratedSurface cat = generate(spec);
  const AdmissibilityReport cr =
      admissibility(cat.surface, assemble_laplacian(cat.surface.mesh()), profile_for(cat));
  CHECK(cr.pass);
  CHECK(cr.numerical_sup_h <= 0.05);
  CHECK_FALSE(cr.analytic_sup_h.has_value());

  const GeneratedSurface strip = make(GeneratorKind::kStripInCylinder);
  const AdmissibilityReport sr = admissibility(
      strip.surface, assemble_laplacian(strip.surface.mesh()), profile_for(strip), strip.exact_sup_h);
  CHECK(sr.threshold == 1.0);
  CHECK(sr.pass);
}

TEST_CASE("analytic and numerical verdicts agree for every generator") {
  for (GeneratorKind kind : kAll) {
    const GeneratedSurface g = make(kind);
    if (!g.exact_sup_h) continue;
    CAPTURE(std::string(to_string(kind)));
    const AdmissibilityReport rep =
        admissibility(g.surface, assemble_laplacian(g.surface.mesh()), profile_for(g), g.exact_sup_h);
    REQUIRE(rep.analytic_pass.has_value());
    CHECK(rep.numerical_pass == *rep.analytic_pass);
  }
}

TEST_CASE("exhaustion sweep on the flat disk") {
  GeneratorSpec spec;
  spec.resolution = 0.04;
  spec.disk_radius = 1.0 - 1e-6;
  spec.conforming_radii = {0.5, 0.7, 0.9};
  const GeneratedSurface disk = generate(spec);
  const SweepReport rep = exhaustion_sweep(disk.surface, ComparisonProfile{}, {0.5, 0.7, 0.9}, disk.name);
  REQUIRE(rep.records.size() == 3);
  CHECK(rep.admissible);
  CHECK(rep.surface_name == "flat_disk");
  const double expected[] = {2.0 * 0.5 / 0.75 * 2.0, 1.4 / 0.51 * 2.0, 1.8 / 0.19 * 2.0};
  for (int i = 0; i < 3; ++i) {
    CHECK(rep.records[i].closed_form_bound == doctest::Approx(expected[i]).epsilon(1e-14));
    CAPTURE(rep.records[i].note);
    REQUIRE(rep.records[i].discrete_tone.has_value());
    if (i > 0) {
      CHECK(rep.records[i].closed_form_bound > rep.records[i - 1].closed_form_bound);
      CHECK(*rep.records[i].discrete_tone > *rep.records[i - 1].discrete_tone);
      CHECK(rep.records[i].free_vertex_count < rep.records[i - 1].free_vertex_count);
    }
    // Dirichlet truncation of a flat annulus sits far above the bound.
    CHECK(*rep.records[i].discrete_tone > rep.records[i].closed_form_bound);
  }
  CHECK(rep.records[0].closed_form_bound == doctest::Approx(2.6667).epsilon(1e-4));
  CHECK(rep.records[1].closed_form_bound == doctest::Approx(5.4902).epsilon(1e-4));
  CHECK(*rep.records[0].discrete_tone ==
        doctest::Approx(oracle::annulus_tone(0.5 + 1e-9, 1.0 - 1e-6)).epsilon(0.01));
}

TEST_CASE("sweep records empty regions instead of failing") {
  const GeneratedSurface disk = make(GeneratorKind::kFlatDisk, 0.1);  // radius 0.99
  const SweepReport rep = exhaustion_sweep(disk.surface, ComparisonProfile{}, {0.3, 0.995}, disk.name);
  REQUIRE(rep.records.size() == 2);
  CHECK(rep.records[0].discrete_tone.has_value());
  CHECK_FALSE(rep.records[1].discrete_tone.has_value());
  CHECK_FALSE(rep.records[1].note.empty());
  CHECK(rep.records[1].free_vertex_count == 0);
}

TEST_CASE("sweep input validation") {
  const GeneratedSurface disk = make(GeneratorKind::kFlatDisk, 0.2);
  CHECK_THROWS_AS(exhaustion_sweep(disk.surface, ComparisonProfile{}, {0.5, 0.4}, "d"), DomainError);
  CHECK_THROWS_AS(exhaustion_sweep(disk.surface, ComparisonProfile{}, {0.5, 1.0}, "d"), DomainError);
  CHECK_THROWS_AS(exhaustion_sweep(disk.surface, ComparisonProfile{}, {0.0, 0.5}, "d"), DomainError);
  // A non-admissible profile still yields a report, flagged.
  ComparisonProfile hot;
  hot.sup_h = 3.0;
  const SweepReport rep = exhaustion_sweep(disk.surface, hot, {0.3, 0.6}, "d");
  CHECK_FALSE(rep.admissible);
  CHECK(rep.records[0].closed_form_bound < 0.0);
}

TEST_CASE("sweep on the strip uses distance to the cylinder axis") {
  const GeneratedSurface strip = make(GeneratorKind::kStripInCylinder, 0.05);
  ComparisonProfile p = profile_for(strip);
  const SweepReport rep = exhaustion_sweep(strip.surface, p, {0.3, 0.6}, strip.name);
  CHECK(rep.admissible);
  CHECK(rep.records[0].closed_form_bound ==
        doctest::Approx(2.0 * 0.3 / (1.0 - 0.09) * 1.0).epsilon(1e-14));
  CHECK(rep.records[0].discrete_tone.has_value());
  CHECK(rep.records[1].discrete_tone.has_value());
}

TEST_CASE("Barta campaign on the flat disk") {
  GeneratorSpec spec;
  spec.resolution = 0.04;
  spec.disk_radius = 1.0 - 1e-6;
  const GeneratedSurface disk = generate(spec);
  const BartaSummary s = barta_campaign(disk.surface, ComparisonProfile{}, {}, 100, 17);
  CHECK(s.m_matrix_ok);
  CHECK(s.violations == 0);
  CHECK(s.trials == 100);
  CHECK(s.radial_bound == doctest::Approx(4.0).epsilon(0.05));
  CHECK(s.radial_bound <= s.lambda1);
  CHECK(std::abs(s.ground_state_bound - s.lambda1) <= 1e-8 * s.lambda1);
  CHECK(s.tightest_bound == doctest::Approx(s.ground_state_bound));
  CHECK(s.random_max_bound <= s.lambda1 + 1e-10);
  CHECK(s.random_min_bound <= s.random_max_bound);

  const BartaSummary again = barta_campaign(disk.surface, ComparisonProfile{}, {}, 100, 17);
  CHECK(again.random_min_bound == s.random_min_bound);
  CHECK(again.random_max_bound == s.random_max_bound);
  const BartaSummary other = barta_campaign(disk.surface, ComparisonProfile{}, {}, 100, 18);
  CHECK(other.random_min_bound != s.random_min_bound);

  CHECK_THROWS_AS(barta_campaign(disk.surface, ComparisonProfile{}, {}, 0, 1), DomainError);
}

TEST_CASE("Barta campaign on an exterior region") {
  GeneratorSpec spec;
  spec.resolution = 0.05;
  spec.conforming_radii = {0.4};
  const GeneratedSurface disk = generate(spec);
  DirichletPolicy policy;
  policy.exterior_radius = 0.4;
  const BartaSummary s = barta_campaign(disk.surface, ComparisonProfile{}, policy, 30, 3);
  CHECK(s.m_matrix_ok);
  CHECK(s.violations == 0);
  CHECK(s.lambda1 > 20.0);
  CHECK(s.radial_bound <= s.lambda1);
}
