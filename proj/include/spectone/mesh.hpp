#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

namespace spectone::mesh {

using Point = Eigen::Vector3d;
using Face = std::array<int, 3>;

/// Triangulated surface with validated combinatorics.
///
/// Construction rejects out-of-range or repeated indices, zero-area faces,
/// edges shared by more than two faces and vertices not referenced by any
/// face. Immutable afterwards.
class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(std::vector<Point> vertices, std::vector<Face> faces);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  /// Sorted indices of vertices on the topological boundary.
  const std::vector<int>& boundary_vertices() const { return boundary_; }
  bool is_boundary(int v) const { return on_boundary_[v]; }

  double face_area(int f) const;
  double total_area() const;
  double max_edge_length() const;

 private:
  std::vector<Point> vertices_;
  std::vector<Face> faces_;
  std::vector<int> boundary_;
  std::vector<bool> on_boundary_;
};

/// A mesh immersed in an open ball B(center, radius), or in the solid
/// cylinder B(center, radius) x R when `axis` is set (one Euclidean factor).
/// Every vertex is strictly inside; checked at construction (DomainError).
class ImmersedSurface {
 public:
  ImmersedSurface(TriMesh mesh, Point center, double radius,
                  std::optional<Eigen::Vector3d> axis = std::nullopt);

  const TriMesh& mesh() const { return mesh_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  const std::optional<Eigen::Vector3d>& axis() const { return axis_; }

  /// Distance from the center (ball) or from the axis line (cylinder).
  double distance(const Point& x) const;

 private:
  TriMesh mesh_;
  Point center_;
  double radius_;
  std::optional<Eigen::Vector3d> axis_;
};

/// Cotangent stiffness S and lumped mass; M^{-1} S approximates -Delta.
struct DiscreteLaplacian {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;
  /// Edges whose off-diagonal stiffness entry is positive (obtuse pairs).
  int positive_off_diagonals = 0;

  int vertex_count() const { return static_cast<int>(mass.size()); }
};

/// True when an off-diagonal stiffness value is positive beyond roundoff
/// relative to `scale` (typically the row diagonal).
bool is_positive_off_diagonal(double value, double scale);

DiscreteLaplacian assemble_laplacian(const TriMesh& mesh);

struct MeanCurvature {
  std::vector<Eigen::Vector3d> vectors;  // H per vertex, points toward the center on a sphere
  Eigen::VectorXd norms;
  double sup_interior = 0.0;  // boundary vertices excluded
  int argmax = -1;            // interior vertex attaining sup_interior, -1 if none
};

/// Mixed Voronoi area per vertex: Voronoi cells on non-obtuse faces, half or
/// a quarter of the face area on obtuse ones. Sums to the total area.
Eigen::VectorXd mixed_area(const TriMesh& mesh);

/// H = -A^{-1} S x applied to the coordinate functions (trace convention),
/// with A the mixed Voronoi area. The barycentric lumped mass is off by a
/// fixed 14.6% at every regular valence-5 vertex whatever the resolution,
/// while the Voronoi area is exact for regular fans of any valence.
MeanCurvature mean_curvature(const ImmersedSurface& surface, const DiscreteLaplacian& lap);

Eigen::VectorXd extrinsic_distance(const ImmersedSurface& surface);

/// Discrete exterior M \ K_i of the exhaustion set K_i = {|x - p| <= r_i}.
struct ExteriorRegion {
  ImmersedSurface surface;
  std::vector<int> parent_vertex;  // submesh vertex -> original vertex
  std::vector<int> dirichlet;      // sorted submesh vertex indices
};

/// Keeps faces whose three vertices lie at distance > r_i. Vertices touching
/// a removed face, and original boundary vertices, are flagged Dirichlet.
/// Throws EmptyRegionError when no face survives.
ExteriorRegion exterior_region(const ImmersedSurface& surface, double r_i);

/// Area-weighted vertex normals (unit length).
std::vector<Eigen::Vector3d> vertex_normals(const TriMesh& mesh);

/// Ambient scalar field with analytic derivatives.
struct AmbientField {
  std::function<double(const Point&)> value;
  std::function<Eigen::Vector3d(const Point&)> gradient;
  std::function<Eigen::Matrix3d(const Point&)> hessian;
};

struct CompositionResidual {
  Eigen::VectorXd laplacian;  // discrete Delta(g o phi)
  Eigen::VectorXd predicted;  // tangential trace of Hess g + <grad g, H>
  Eigen::VectorXd residual;   // laplacian - predicted
  double max_interior = 0.0;
};

/// Checks Delta(g o phi) = tr_T Hess g + <grad g, H> vertex by vertex, with
/// the tangent plane taken orthogonal to the area-weighted vertex normal.
/// Both sides use the mixed-area normalization of mean_curvature.
CompositionResidual composition_check(const ImmersedSurface& surface,
                                      const DiscreteLaplacian& lap, const AmbientField& g);

}  // namespace spectone::mesh
