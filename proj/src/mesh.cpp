#include "spectone/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "spectone/errors.hpp"

namespace spectone::mesh {

namespace {

using Edge = std::pair<int, int>;

Edge make_edge(int i, int j) { return i < j ? Edge{i, j} : Edge{j, i}; }

// cot of the angle at `apex` in triangle (apex, p, q).
double cot_at(const Point& apex, const Point& p, const Point& q) {
  const Eigen::Vector3d u = p - apex;
  const Eigen::Vector3d v = q - apex;
  return u.dot(v) / u.cross(v).norm();
}

}  // namespace

TriMesh::TriMesh(std::vector<Point> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int n = vertex_count();
  if (faces_.empty()) throw MeshError("mesh has no faces");

  std::map<Edge, int> edge_faces;
  std::vector<bool> referenced(n, false);
  for (int f = 0; f < face_count(); ++f) {
    const Face& face = faces_[f];
    for (int c = 0; c < 3; ++c) {
      if (face[c] < 0 || face[c] >= n) {
        throw MeshError("face " + std::to_string(f) + " references vertex " +
                        std::to_string(face[c]) + " outside [0, " + std::to_string(n) + ")");
      }
      referenced[face[c]] = true;
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw MeshError("face " + std::to_string(f) + " repeats a vertex index");
    }
    for (int c = 0; c < 3; ++c) {
      if (!vertices_[face[c]].allFinite()) {
        throw MeshError("vertex " + std::to_string(face[c]) + " has non-finite coordinates");
      }
    }
    const Point& a = vertices_[face[0]];
    const Point& b = vertices_[face[1]];
    const Point& c = vertices_[face[2]];
    const double longest =
        std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    const double twice_area = (b - a).cross(c - a).norm();
    if (!(twice_area > 1e-12 * longest)) {
      throw MeshError("degenerate (zero-area) face " + std::to_string(f));
    }
    for (int c2 = 0; c2 < 3; ++c2) ++edge_faces[make_edge(face[c2], face[(c2 + 1) % 3])];
  }
  for (int v = 0; v < n; ++v) {
    if (!referenced[v]) throw MeshError("vertex " + std::to_string(v) + " is not used by any face");
  }

  on_boundary_.assign(n, false);
  for (const auto& [edge, count] : edge_faces) {
    if (count > 2) {
      throw MeshError("non-manifold edge (" + std::to_string(edge.first) + ", " +
                      std::to_string(edge.second) + ") shared by " + std::to_string(count) +
                      " faces");
    }
    if (count == 1) {
      on_boundary_[edge.first] = true;
      on_boundary_[edge.second] = true;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (on_boundary_[v]) boundary_.push_back(v);
  }
}

double TriMesh::face_area(int f) const {
  const Face& face = faces_[f];
  const Point& a = vertices_[face[0]];
  return 0.5 * (vertices_[face[1]] - a).cross(vertices_[face[2]] - a).norm();
}

double TriMesh::total_area() const {
  double area = 0.0;
  for (int f = 0; f < face_count(); ++f) area += face_area(f);
  return area;
}

double TriMesh::max_edge_length() const {
  double longest = 0.0;
  for (const Face& face : faces_) {
    for (int c = 0; c < 3; ++c) {
      longest = std::max(longest, (vertices_[face[c]] - vertices_[face[(c + 1) % 3]]).norm());
    }
  }
  return longest;
}

ImmersedSurface::ImmersedSurface(TriMesh mesh, Point center, double radius,
                                 std::optional<Eigen::Vector3d> axis)
    : mesh_(std::move(mesh)), center_(std::move(center)), radius_(radius), axis_(axis) {
  if (!(std::isfinite(radius_) && radius_ > 0.0)) {
    throw DomainError("ball radius must be finite and > 0");
  }
  if (axis_) {
    const double len = axis_->norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("cylinder axis must be nonzero");
    *axis_ /= len;
  }
  for (int v = 0; v < mesh_.vertex_count(); ++v) {
    const double d = distance(mesh_.vertices()[v]);
    if (!(d < radius_)) {
      throw DomainError("vertex " + std::to_string(v) + " at distance " + std::to_string(d) +
                      " is not strictly inside the " + (axis_ ? "cylinder" : "ball") +
                      " of radius " + std::to_string(radius_));
    }
  }
}

double ImmersedSurface::distance(const Point& x) const {
  Eigen::Vector3d d = x - center_;
  if (axis_) d -= axis_->dot(d) * (*axis_);
  return d.norm();
}

bool is_positive_off_diagonal(double value, double scale) {
  return value > 1e-12 * std::abs(scale);
}

DiscreteLaplacian assemble_laplacian(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  const auto& x = mesh.vertices();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(12 * mesh.face_count());
  DiscreteLaplacian lap;
  lap.mass = Eigen::VectorXd::Zero(n);

  for (int f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.faces()[f];
    const double third = mesh.face_area(f) / 3.0;
    for (int c = 0; c < 3; ++c) {
      const int apex = face[c];
      const int i = face[(c + 1) % 3];
      const int j = face[(c + 2) % 3];
      const double w = 0.5 * cot_at(x[apex], x[i], x[j]);
      triplets.emplace_back(i, j, -w);
      triplets.emplace_back(j, i, -w);
      triplets.emplace_back(i, i, w);
      triplets.emplace_back(j, j, w);
      lap.mass[apex] += third;
    }
  }
  lap.stiffness.resize(n, n);
  lap.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  lap.stiffness.makeCompressed();

  const Eigen::VectorXd diag = lap.stiffness.diagonal();
  for (int col = 0; col < n; ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap.stiffness, col); it; ++it) {
      if (it.row() < col && is_positive_off_diagonal(it.value(), std::max(diag[col], diag[it.row()]))) {
        ++lap.positive_off_diagonals;
      }
    }
  }
  return lap;
}

Eigen::VectorXd mixed_area(const TriMesh& mesh) {
  Eigen::VectorXd area = Eigen::VectorXd::Zero(mesh.vertex_count());
  const auto& x = mesh.vertices();
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.faces()[f];
    const double total = mesh.face_area(f);
    int obtuse = -1;
    std::array<double, 3> cot{};
    for (int c = 0; c < 3; ++c) {
      const Eigen::Vector3d u = x[face[(c + 1) % 3]] - x[face[c]];
      const Eigen::Vector3d w = x[face[(c + 2) % 3]] - x[face[c]];
      cot[c] = u.dot(w) / u.cross(w).norm();
      if (u.dot(w) < 0.0) obtuse = c;
    }
    if (obtuse < 0) {
      // Voronoi share: |PQ|^2 cot R + |PR|^2 cot Q over 8.
      for (int c = 0; c < 3; ++c) {
        const int q = (c + 1) % 3;
        const int s = (c + 2) % 3;
        area[face[c]] += ((x[face[q]] - x[face[c]]).squaredNorm() * cot[s] +
                          (x[face[s]] - x[face[c]]).squaredNorm() * cot[q]) / 8.0;
      }
    } else {
      for (int c = 0; c < 3; ++c) area[face[c]] += (c == obtuse ? 0.5 : 0.25) * total;
    }
  }
  return area;
}

MeanCurvature mean_curvature(const ImmersedSurface& surface, const DiscreteLaplacian& lap) {
  const TriMesh& mesh = surface.mesh();
  const int n = mesh.vertex_count();
  if (lap.vertex_count() != n) throw MeshError("Laplacian does not match the mesh vertex count");
  const Eigen::VectorXd area = mixed_area(mesh);

  Eigen::MatrixXd coords(n, 3);
  for (int v = 0; v < n; ++v) coords.row(v) = mesh.vertices()[v].transpose();
  const Eigen::MatrixXd s_coords = lap.stiffness * coords;

  MeanCurvature out;
  out.vectors.resize(n);
  out.norms.resize(n);
  for (int v = 0; v < n; ++v) {
    out.vectors[v] = -s_coords.row(v).transpose() / area[v];
    out.norms[v] = out.vectors[v].norm();
    if (!mesh.is_boundary(v) && out.norms[v] >= out.sup_interior) {
      out.sup_interior = out.norms[v];
      out.argmax = v;
    }
  }
  return out;
}

Eigen::VectorXd extrinsic_distance(const ImmersedSurface& surface) {
  const auto& x = surface.mesh().vertices();
  Eigen::VectorXd rho(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) rho[v] = surface.distance(x[v]);
  return rho;
}

ExteriorRegion exterior_region(const ImmersedSurface& surface, double r_i) {
  if (!(r_i > 0.0 && r_i < surface.radius())) {
    throw DomainError("exhaustion radius requires 0 < r_i < r, got r_i = " +
                      std::to_string(r_i) + ", r = " + std::to_string(surface.radius()));
  }
  const TriMesh& mesh = surface.mesh();
  const Eigen::VectorXd rho = extrinsic_distance(surface);
  const int n = mesh.vertex_count();

  std::vector<bool> touches_removed(n, false);
  std::vector<Face> kept;
  for (const Face& face : mesh.faces()) {
    if (rho[face[0]] > r_i && rho[face[1]] > r_i && rho[face[2]] > r_i) {
      kept.push_back(face);
    } else {
      for (int v : face) touches_removed[v] = true;
    }
  }
  if (kept.empty()) {
    throw EmptyRegionError("exterior region is empty: no face lies outside r_i = " +
                           std::to_string(r_i));
  }

  std::vector<int> new_index(n, -1);
  std::vector<int> parent;
  std::vector<Point> points;
  for (Face& face : kept) {
    for (int& v : face) {
      if (new_index[v] < 0) {
        new_index[v] = static_cast<int>(parent.size());
        parent.push_back(v);
      }
      v = new_index[v];
    }
  }
  // Keep original vertex order so results do not depend on face order.
  std::vector<int> order(parent.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(), [&](int p, int q) { return parent[p] < parent[q]; });
  std::vector<int> remap(parent.size());
  std::vector<int> sorted_parent(parent.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    remap[order[k]] = static_cast<int>(k);
    sorted_parent[k] = parent[order[k]];
  }
  for (Face& face : kept) {
    for (int& v : face) v = remap[v];
  }
  points.reserve(sorted_parent.size());
  for (int p : sorted_parent) points.push_back(mesh.vertices()[p]);

  std::vector<int> dirichlet;
  for (std::size_t k = 0; k < sorted_parent.size(); ++k) {
    const int p = sorted_parent[k];
    if (touches_removed[p] || mesh.is_boundary(p)) dirichlet.push_back(static_cast<int>(k));
  }

  return ExteriorRegion{
      ImmersedSurface(TriMesh(std::move(points), std::move(kept)), surface.center(),
                      surface.radius(), surface.axis()),
      std::move(sorted_parent), std::move(dirichlet)};
}

std::vector<Eigen::Vector3d> vertex_normals(const TriMesh& mesh) {
  std::vector<Eigen::Vector3d> normals(mesh.vertex_count(), Eigen::Vector3d::Zero());
  const auto& x = mesh.vertices();
  for (const Face& face : mesh.faces()) {
    // Cross product length is twice the area, so this is area weighted.
    const Eigen::Vector3d n = (x[face[1]] - x[face[0]]).cross(x[face[2]] - x[face[0]]);
    for (int v : face) normals[v] += n;
  }
  for (auto& n : normals) n.normalize();
  return normals;
}

CompositionResidual composition_check(const ImmersedSurface& surface,
                                      const DiscreteLaplacian& lap, const AmbientField& g) {
  const TriMesh& mesh = surface.mesh();
  const int n = mesh.vertex_count();
  const MeanCurvature h = mean_curvature(surface, lap);
  const auto normals = vertex_normals(mesh);

  Eigen::VectorXd values(n);
  for (int v = 0; v < n; ++v) values[v] = g.value(mesh.vertices()[v]);

  CompositionResidual out;
  out.laplacian = -(lap.stiffness * values).cwiseQuotient(mixed_area(mesh));
  out.predicted.resize(n);
  for (int v = 0; v < n; ++v) {
    const Point& x = mesh.vertices()[v];
    const Eigen::Matrix3d hess = g.hessian(x);
    const double tangential_trace = hess.trace() - normals[v].dot(hess * normals[v]);
    out.predicted[v] = tangential_trace + g.gradient(x).dot(h.vectors[v]);
  }
  out.residual = out.laplacian - out.predicted;
  for (int v = 0; v < n; ++v) {
    if (!mesh.is_boundary(v)) out.max_interior = std::max(out.max_interior, std::abs(out.residual[v]));
  }
  return out;
}

}  // namespace spectone::mesh
