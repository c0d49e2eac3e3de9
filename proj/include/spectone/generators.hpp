#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectone/mesh.hpp"

namespace spectone::harness {

enum class GeneratorKind {
  kFlatDisk,
  kSphericalCap,
  kSphere,
  kCatenoidBand,
  kEnneperScaled,
  kStripInCylinder,
  kRevolutionAccumulating,
};

std::string_view to_string(GeneratorKind kind);
/// Accepts the snake_case names, e.g. "flat_disk". Throws DomainError.
GeneratorKind parse_generator_kind(std::string_view name);

/// Test immersion description. Fields not used by `kind` are ignored.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kFlatDisk;
  double resolution = 0.05;  // target max edge length
  double ball_radius = 1.0;  // r: radius of the ball (or of the cylinder cross-section)
  mesh::Point center = mesh::Point::Zero();

  // flat_disk
  double disk_radius = 0.99;
  /// Vertex rings are placed just outside each of these distances, so the
  /// face-based exterior of that exhaustion radius has a round inner edge.
  std::vector<double> conforming_radii;

  // sphere, spherical_cap
  double sphere_radius = 0.5;
  double cap_radius = 0.4;  // base-circle radius of the cap, < sphere_radius
  int subdivisions = -1;    // sphere: icosphere level, -1 picks it from resolution

  // catenoid_band, enneper_scaled
  double half_width = 1.0;       // catenoid: |v| <= half_width
  double scale = 0.5;            // uniform scale factor
  double enneper_radius = 0.8;   // parameter-disk radius

  // strip_in_cylinder, revolution_accumulating
  double strip_radius = 0.9;  // strip: |s| <= strip_radius (inside the cylinder)
  double length = 1.0;        // strip: half-length along the axis
  double spiral_rate = 1.0;   // strip: twist per unit length; revolution: wave rate
  double profile_cap = 3.0;   // revolution: profile parameter truncation
};

/// A generated immersion with its analytic metadata.
struct GeneratedSurface {
  std::string name;
  mesh::ImmersedSurface surface;
  std::optional<double> exact_sup_h;  // |H| (trace convention) where known
  int ell = 0;                        // 1 for the cylinder case
};

/// Throws DomainError on inconsistent parameters (e.g. a cap that does not
/// fit in the ball).
GeneratedSurface generate(const GeneratorSpec& spec);

/// Regular right-triangle grid on [0, side]^2 with `cells` cells per side.
mesh::TriMesh square_grid(int cells, double side = 1.0);

/// Icosahedron subdivided `level` times and projected to the sphere.
mesh::TriMesh icosphere(int level, double radius, const mesh::Point& center);

/// Lawson edge flips until every interior edge has opposite angles summing to
/// at most pi (angles measured on the embedded triangles). Returns the flip
/// count. Planar meshes end up Delaunay.
int delaunay_flip(const std::vector<mesh::Point>& points, std::vector<mesh::Face>& faces,
                  int max_passes = 100);

}  // namespace spectone::harness
