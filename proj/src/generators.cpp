#include "spectone/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "spectone/errors.hpp"

namespace spectone::harness {

namespace {

using mesh::Face;
using mesh::Point;
constexpr double kPi = std::numbers::pi;

struct Param {
  double u = 0.0;
  double v = 0.0;
};

struct ParamMesh {
  std::vector<Param> params;
  std::vector<Face> faces;
};

// Triangulates the band between two rows of vertices sorted by position.
// Row b lies on the side such that (a_i, a_{i+1}, b_j) is counterclockwise
// unless `reverse` is set. Periodic rows wrap with the given period.
void stitch(const std::vector<int>& a, const std::vector<double>& pa, const std::vector<int>& b,
            const std::vector<double>& pb, bool periodic, double period, bool reverse,
            std::vector<Face>& faces) {
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  auto pos_a = [&](int i) { return i < na ? pa[i] : pa[i - na] + period; };
  auto pos_b = [&](int j) { return j < nb ? pb[j] : pb[j - nb] + period; };
  const int end_a = periodic ? na : na - 1;
  const int end_b = periodic ? nb : nb - 1;
  auto emit = [&](int p, int q, int s) {
    faces.push_back(reverse ? Face{p, s, q} : Face{p, q, s});
  };
  int i = 0;
  int j = 0;
  while (i < end_a || j < end_b) {
    const bool advance_a = j == end_b || (i < end_a && pos_a(i + 1) <= pos_b(j + 1));
    if (advance_a) {
      emit(a[i % na], a[(i + 1) % na], b[j % nb]);
      ++i;
    } else {
      emit(a[i % na], b[(j + 1) % nb], b[j % nb]);
      ++j;
    }
  }
}

double orient(const Param& a, const Param& b, const Param& c) {
  return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

// Positive when d lies strictly inside the circumcircle of the
// counterclockwise triangle (a, b, c).
double incircle(const Param& a, const Param& b, const Param& c, const Param& d) {
  const double ax = a.u - d.u, ay = a.v - d.v;
  const double bx = b.u - d.u, by = b.v - d.v;
  const double cx = c.u - d.u, cy = c.v - d.v;
  return (ax * ax + ay * ay) * (bx * cy - cx * by) - (bx * bx + by * by) * (ax * cy - cx * ay) +
         (cx * cx + cy * cy) * (ax * by - bx * ay);
}

// Bowyer-Watson triangulation of planar points whose convex hull is strictly
// convex at every hull vertex. Insertion order matters only for speed; nearby
// consecutive points keep the point-location walks short.
std::vector<Face> planar_delaunay(const std::vector<Param>& input) {
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // nb[k] shares the edge opposite v[k]
    bool alive = true;
  };
  const int n = static_cast<int>(input.size());
  double extent = 1.0;
  for (const Param& p : input) extent = std::max({extent, std::abs(p.u), std::abs(p.v)});
  std::vector<Param> pts = input;
  const double big = 1e4 * extent;
  pts.push_back({-big, -big});
  pts.push_back({big, -big});
  pts.push_back({0.0, big});
  std::vector<Tri> tris{Tri{{n, n + 1, n + 2}, {-1, -1, -1}}};

  int last = 0;
  std::vector<int> cavity;
  std::vector<char> in_cavity(1, 0);
  struct Rim {
    int a, b, outside;
  };
  std::vector<Rim> rim;
  std::unordered_map<int, int> by_start;
  std::unordered_map<int, int> by_end;

  for (int i = 0; i < n; ++i) {
    const Param& p = pts[i];
    int t = last;
    for (int guard = 0;; ++guard) {
      if (guard > 4 * static_cast<int>(tris.size()) + 16) throw MeshError("planar_delaunay: point location failed");
      int next = -1;
      for (int k = 0; k < 3 && next < 0; ++k) {
        const Tri& tr = tris[t];
        if (orient(pts[tr.v[(k + 1) % 3]], pts[tr.v[(k + 2) % 3]], p) < 0.0) next = tr.nb[k];
      }
      if (next < 0) break;
      t = next;
    }

    cavity.assign(1, t);
    in_cavity.resize(tris.size(), 0);
    in_cavity[t] = 1;
    rim.clear();
    for (std::size_t c = 0; c < cavity.size(); ++c) {
      const Tri tr = tris[cavity[c]];
      for (int k = 0; k < 3; ++k) {
        const int a = tr.v[(k + 1) % 3];
        const int b = tr.v[(k + 2) % 3];
        const int o = tr.nb[k];
        if (o >= 0 && in_cavity[o]) continue;
        if (o >= 0) {
          const Tri& ot = tris[o];
          if (incircle(pts[ot.v[0]], pts[ot.v[1]], pts[ot.v[2]], p) > 0.0) {
            in_cavity[o] = 1;
            cavity.push_back(o);
            continue;
          }
        }
        rim.push_back({a, b, o});
      }
    }
    // A neighbor first rejected and later absorbed through another edge
    // leaves stale rim entries.
    std::erase_if(rim, [&](const Rim& e) { return e.outside >= 0 && in_cavity[e.outside]; });

    by_start.clear();
    by_end.clear();
    const int first = static_cast<int>(tris.size());
    for (const Rim& e : rim) {
      const int id = static_cast<int>(tris.size());
      tris.push_back(Tri{{e.a, e.b, i}, {-1, -1, e.outside}});
      by_start[e.a] = id;
      by_end[e.b] = id;
      if (e.outside >= 0) {
        Tri& ot = tris[e.outside];
        for (int k = 0; k < 3; ++k) {
          if (ot.v[k] != e.a && ot.v[k] != e.b) ot.nb[k] = id;
        }
      }
    }
    for (int id = first; id < static_cast<int>(tris.size()); ++id) {
      Tri& tr = tris[id];
      tr.nb[0] = by_start.at(tr.v[1]);  // edge (b, p)
      tr.nb[1] = by_end.at(tr.v[0]);    // edge (p, a)
    }
    for (int c : cavity) {
      tris[c].alive = false;
      in_cavity[c] = 0;
    }
    last = static_cast<int>(tris.size()) - 1;
  }

  std::vector<Face> faces;
  for (const Tri& tr : tris) {
    if (!tr.alive || tr.v[0] >= n || tr.v[1] >= n || tr.v[2] >= n) continue;
    faces.push_back({tr.v[0], tr.v[1], tr.v[2]});
  }
  return faces;
}

// Disk of the given radius in the (u, v) plane: an equilateral lattice through
// the origin, a boundary ring, and one ring just outside each conforming
// radius. Lattice points are cleared from a band around every ring so that
// ring chords come out as Delaunay edges and no triangle straddles a ring.
ParamMesh lattice_disk(double radius, const std::vector<double>& conforming, double spacing) {
  std::vector<double> rings;
  for (double c : conforming) {
    if (c > 0.0 && c < radius - spacing) rings.push_back(c);
  }
  std::sort(rings.begin(), rings.end());
  // Rings closer than one spacing cannot both be resolved; keep the first.
  std::vector<double> kept;
  for (double c : rings) {
    if (kept.empty() || c - kept.back() >= spacing) kept.push_back(c);
  }
  rings = std::move(kept);
  rings.push_back(radius);

  const double clearance = 0.45 * spacing;
  auto cleared = [&](double rho) {
    if (rho > radius - clearance) return true;
    for (double c : rings) {
      if (std::abs(rho - c) < clearance) return true;
    }
    return false;
  };

  ParamMesh pm;
  const double dv = spacing * std::sqrt(3.0) / 2.0;
  const int rows = static_cast<int>(std::ceil(radius / dv));
  for (int j = -rows; j <= rows; ++j) {
    const double v = j * dv;
    const double shift = (j % 2 != 0) ? 0.5 * spacing : 0.0;
    const int cols = static_cast<int>(std::ceil(radius / spacing)) + 1;
    for (int i = -cols; i <= cols; ++i) {
      const double u = i * spacing + shift;
      if (!cleared(std::hypot(u, v))) pm.params.push_back({u, v});
    }
  }
  // Ring chords of 0.8 spacing keep the chord's diameter disk free of
  // lattice points, which is what makes each chord a Delaunay edge.
  for (double c : rings) {
    const int count = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * c / (0.8 * spacing))));
    for (int k = 0; k < count; ++k) {
      const double theta = 2.0 * kPi * k / count;
      pm.params.push_back({c * std::cos(theta), c * std::sin(theta)});
    }
  }
  pm.faces = planar_delaunay(pm.params);
  return pm;
}

// Staggered rows covering [u0, u1] x [v0, v1]; odd rows are shifted by half
// a step. With `periodic_u`, u wraps with period u1 - u0.
ParamMesh staggered_rows(double u0, double u1, double v0, double v1, double spacing,
                         bool periodic_u) {
  ParamMesh pm;
  const double width = u1 - u0;
  const int nu = std::max(periodic_u ? 8 : 1, static_cast<int>(std::ceil(width / spacing - 1e-9)));
  const double du = width / nu;
  const int nv = std::max(1, static_cast<int>(std::ceil((v1 - v0) / (du * std::sqrt(3.0) / 2.0) - 1e-9)));
  std::vector<int> prev;
  std::vector<double> prev_pos;
  for (int j = 0; j <= nv; ++j) {
    const double v = v0 + (v1 - v0) * j / nv;
    std::vector<double> pos;
    if (periodic_u) {
      const double shift = (j % 2 == 1) ? 0.5 : 0.0;
      for (int i = 0; i < nu; ++i) pos.push_back((i + shift) * du);
    } else if (j % 2 == 0) {
      for (int i = 0; i <= nu; ++i) pos.push_back(i * du);
    } else {
      pos.push_back(0.0);
      for (int i = 0; i < nu; ++i) pos.push_back((i + 0.5) * du);
      pos.push_back(width);
    }
    std::vector<int> row;
    for (double p : pos) {
      row.push_back(static_cast<int>(pm.params.size()));
      pm.params.push_back({u0 + p, v});
    }
    if (j > 0) stitch(prev, prev_pos, row, pos, periodic_u, width, false, pm.faces);
    prev = std::move(row);
    prev_pos = std::move(pos);
  }
  return pm;
}

double cot_at(const Point& apex, const Point& p, const Point& q) {
  const Eigen::Vector3d u = p - apex;
  const Eigen::Vector3d v = q - apex;
  return u.dot(v) / u.cross(v).norm();
}

Eigen::Vector3d face_normal(const Point& a, const Point& b, const Point& c) {
  return (b - a).cross(c - a);
}

int opposite(const Face& f, int i, int j) {
  for (int v : f) {
    if (v != i && v != j) return v;
  }
  return -1;
}

// True when f contains the directed edge i -> j.
bool has_directed(const Face& f, int i, int j) {
  for (int c = 0; c < 3; ++c) {
    if (f[c] == i && f[(c + 1) % 3] == j) return true;
  }
  return false;
}

struct Built {
  std::vector<Point> points;
  std::vector<Face> faces;
};

// Re-runs `build(spacing)` with a shrinking spacing until the longest edge
// meets the target resolution.
Built fit_resolution(double target, double initial_spacing,
                     const std::function<Built(double)>& build) {
  double spacing = initial_spacing;
  Built out;
  for (int pass = 0; pass < 6; ++pass) {
    out = build(spacing);
    double longest = 0.0;
    for (const Face& f : out.faces) {
      for (int c = 0; c < 3; ++c) {
        longest = std::max(longest, (out.points[f[c]] - out.points[f[(c + 1) % 3]]).norm());
      }
    }
    if (longest <= target * 1.001) break;
    spacing *= 0.99 * target / longest;
  }
  return out;
}

Built map_params(const ParamMesh& pm, const std::function<Point(double, double)>& map) {
  Built b;
  b.points.reserve(pm.params.size());
  for (const Param& p : pm.params) b.points.push_back(map(p.u, p.v));
  b.faces = pm.faces;
  delaunay_flip(b.points, b.faces);
  return b;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

GeneratedSurface finish(const GeneratorSpec& spec, Built built, std::optional<double> exact_h,
                        std::optional<Eigen::Vector3d> axis = std::nullopt) {
  const double r = spec.ball_radius;
  double max_dist = 0.0;
  for (const Point& x : built.points) {
    Eigen::Vector3d d = x - spec.center;
    if (axis) d -= axis->dot(d) * (*axis);
    max_dist = std::max(max_dist, d.norm());
  }
  require(r - max_dist >= 1e-6 * r * (1.0 - 1e-9),
          std::string(to_string(spec.kind)) + " does not fit strictly inside the " +
              (axis ? "cylinder" : "ball") + " of radius " + std::to_string(r) +
              " (max distance " + std::to_string(max_dist) + ", required margin 1e-6 r)");
  mesh::TriMesh tri(std::move(built.points), std::move(built.faces));
  return GeneratedSurface{std::string(to_string(spec.kind)),
                          mesh::ImmersedSurface(std::move(tri), spec.center, r, axis), exact_h,
                          axis ? 1 : 0};
}

GeneratedSurface make_flat_disk(const GeneratorSpec& spec) {
  const double r = spec.ball_radius;
  const double radius = spec.disk_radius;
  require(radius > 0.0, "flat_disk requires disk_radius > 0");
  require(radius <= r * (1.0 - 1e-6), "flat_disk radius must be <= (1 - 1e-6) r to stay inside the ball");
  // Each conforming radius gets a ring just outside it, so the exterior of
  // that radius has a round inner edge.
  std::vector<double> rings;
  for (double c : spec.conforming_radii) rings.push_back(c + 1e-9 * r);
  auto build = [&](double spacing) {
    const ParamMesh pm = lattice_disk(radius, rings, spacing);
    return map_params(pm, [&](double u, double v) { return Point(spec.center + Point(u, v, 0.0)); });
  };
  return finish(spec, fit_resolution(spec.resolution, spec.resolution / 1.15, build), 0.0);
}

GeneratedSurface make_sphere(const GeneratorSpec& spec) {
  const double big_r = spec.sphere_radius;
  require(big_r > 0.0, "sphere requires sphere_radius > 0");
  require(big_r < spec.ball_radius, "sphere radius must be smaller than the ball radius");
  int level = spec.subdivisions;
  if (level < 0) {
    level = 0;
    while (level < 9 && icosphere(level, big_r, spec.center).max_edge_length() > spec.resolution) ++level;
  }
  mesh::TriMesh tri = icosphere(level, big_r, spec.center);
  Built b{tri.vertices(), tri.faces()};
  return finish(spec, std::move(b), 2.0 / big_r);
}

GeneratedSurface make_spherical_cap(const GeneratorSpec& spec) {
  const double big_r = spec.sphere_radius;
  const double c = spec.cap_radius;
  require(big_r > 0.0 && c > 0.0, "spherical_cap requires sphere_radius > 0 and cap_radius > 0");
  require(c < big_r, "spherical_cap requires cap_radius < sphere_radius");
  require(c < spec.ball_radius, "spherical_cap: cap radius exceeds the ball radius");
  const double theta_max = std::asin(c / big_r);
  const double z0 = big_r * (1.0 + std::cos(theta_max)) / 2.0;  // centers the cap vertically
  auto map = [&](double u, double v) {
    const double theta = std::hypot(u, v);
    const double phi = std::atan2(v, u);
    return Point(spec.center + Point(big_r * std::sin(theta) * std::cos(phi),
                                     big_r * std::sin(theta) * std::sin(phi),
                                     big_r * std::cos(theta) - z0));
  };
  auto build = [&](double spacing) {
    return map_params(lattice_disk(theta_max, {}, spacing), map);
  };
  return finish(spec, fit_resolution(spec.resolution, spec.resolution / (1.15 * big_r), build),
                2.0 / big_r);
}

GeneratedSurface make_catenoid(const GeneratorSpec& spec) {
  const double s = spec.scale;
  const double w = spec.half_width;
  require(s > 0.0 && w > 0.0, "catenoid_band requires scale > 0 and half_width > 0");
  auto map = [&](double u, double v) {
    return Point(spec.center + s * Point(std::cosh(v) * std::cos(u), std::cosh(v) * std::sin(u), v));
  };
  auto build = [&](double spacing) {
    return map_params(staggered_rows(0.0, 2.0 * kPi, -w, w, spacing, true), map);
  };
  return finish(spec,
                fit_resolution(spec.resolution, spec.resolution / (1.05 * s * std::cosh(w)), build),
                0.0);
}

GeneratedSurface make_enneper(const GeneratorSpec& spec) {
  const double s = spec.scale;
  const double rho = spec.enneper_radius;
  require(s > 0.0 && rho > 0.0, "enneper_scaled requires scale > 0 and enneper_radius > 0");
  auto map = [&](double u, double v) {
    return Point(spec.center + s * Point(u - u * u * u / 3.0 + u * v * v,
                                         v - v * v * v / 3.0 + v * u * u, u * u - v * v));
  };
  auto build = [&](double spacing) {
    return map_params(lattice_disk(rho, {}, spacing), map);
  };
  return finish(spec,
                fit_resolution(spec.resolution, spec.resolution / (1.15 * s * (1.0 + rho * rho)), build),
                0.0);
}

GeneratedSurface make_strip(const GeneratorSpec& spec) {
  const double rho = spec.strip_radius;
  const double len = spec.length;
  const double omega = spec.spiral_rate;
  require(rho > 0.0 && len > 0.0, "strip_in_cylinder requires strip_radius > 0 and length > 0");
  require(rho < spec.ball_radius, "strip_in_cylinder: strip radius must be below the cylinder radius");
  // Helicoid piece (a flat strip when omega = 0): minimal, inside the cylinder.
  auto map = [&](double u, double v) {
    return Point(spec.center + Point(u * std::cos(omega * v), u * std::sin(omega * v), v));
  };
  auto build = [&](double spacing) {
    return map_params(staggered_rows(-rho, rho, -len, len, spacing, false), map);
  };
  const double stretch = std::sqrt(1.0 + omega * omega * rho * rho);
  return finish(spec, fit_resolution(spec.resolution, spec.resolution / (1.15 * stretch), build),
                0.0, Eigen::Vector3d::UnitZ());
}

GeneratedSurface make_revolution(const GeneratorSpec& spec) {
  const double r = spec.ball_radius;
  const double cap = spec.profile_cap;
  const double omega = spec.spiral_rate;
  constexpr double kWave = 0.3;
  require(cap > 0.0, "revolution_accumulating requires profile_cap > 0");
  require(std::exp(-cap) >= 1e-6,
          "revolution_accumulating: profile_cap > ln(1e6) leaves no containment margin");
  const double t_max = 1.0 - std::exp(-cap);
  // Parameter t = rho / r; profile rho(s) = r (1 - e^{-s}) with s = -ln(1 - t).
  auto map = [&](double u, double v) {
    const double t = std::hypot(u, v);
    const double phi = std::atan2(v, u);
    const double s = -std::log1p(-t);
    const double rho = r * t;
    const double wave = kWave * std::sin(omega * s);
    const double radial = rho * std::sqrt(1.0 - wave * wave);
    return Point(spec.center + Point(radial * std::cos(phi), radial * std::sin(phi), rho * wave));
  };
  auto build = [&](double spacing) {
    return map_params(lattice_disk(t_max, {}, spacing), map);
  };
  const double stretch = r * (1.0 + kWave * std::abs(omega) / (1.0 - t_max));
  return finish(spec, fit_resolution(spec.resolution, spec.resolution / (1.15 * stretch), build),
                std::nullopt);
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kFlatDisk: return "flat_disk";
    case GeneratorKind::kSphericalCap: return "spherical_cap";
    case GeneratorKind::kSphere: return "sphere";
    case GeneratorKind::kCatenoidBand: return "catenoid_band";
    case GeneratorKind::kEnneperScaled: return "enneper_scaled";
    case GeneratorKind::kStripInCylinder: return "strip_in_cylinder";
    case GeneratorKind::kRevolutionAccumulating: return "revolution_accumulating";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  for (GeneratorKind kind :
       {GeneratorKind::kFlatDisk, GeneratorKind::kSphericalCap, GeneratorKind::kSphere,
        GeneratorKind::kCatenoidBand, GeneratorKind::kEnneperScaled,
        GeneratorKind::kStripInCylinder, GeneratorKind::kRevolutionAccumulating}) {
    if (to_string(kind) == name) return kind;
  }
  throw DomainError("unknown generator '" + std::string(name) + "'");
}

GeneratedSurface generate(const GeneratorSpec& spec) {
  require(std::isfinite(spec.resolution) && spec.resolution > 0.0, "generator resolution must be > 0");
  require(std::isfinite(spec.ball_radius) && spec.ball_radius > 0.0, "ball radius must be > 0");
  switch (spec.kind) {
    case GeneratorKind::kFlatDisk: return make_flat_disk(spec);
    case GeneratorKind::kSphericalCap: return make_spherical_cap(spec);
    case GeneratorKind::kSphere: return make_sphere(spec);
    case GeneratorKind::kCatenoidBand: return make_catenoid(spec);
    case GeneratorKind::kEnneperScaled: return make_enneper(spec);
    case GeneratorKind::kStripInCylinder: return make_strip(spec);
    case GeneratorKind::kRevolutionAccumulating: return make_revolution(spec);
  }
  throw DomainError("unhandled generator kind");
}

mesh::TriMesh square_grid(int cells, double side) {
  require(cells >= 1 && side > 0.0, "square_grid requires cells >= 1 and side > 0");
  std::vector<Point> points;
  std::vector<Face> faces;
  const int stride = cells + 1;
  for (int j = 0; j <= cells; ++j) {
    for (int i = 0; i <= cells; ++i) points.emplace_back(side * i / cells, side * j / cells, 0.0);
  }
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const int v00 = j * stride + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + stride;
      const int v11 = v01 + 1;
      faces.push_back({v00, v10, v11});
      faces.push_back({v00, v11, v01});
    }
  }
  return mesh::TriMesh(std::move(points), std::move(faces));
}

mesh::TriMesh icosphere(int level, double radius, const Point& center) {
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point> points{{-1, g, 0}, {1, g, 0},  {-1, -g, 0}, {1, -g, 0},
                            {0, -1, g}, {0, 1, g},  {0, -1, -g}, {0, 1, -g},
                            {g, 0, -1}, {g, 0, 1},  {-g, 0, -1}, {-g, 0, 1}};
  for (Point& p : points) p.normalize();
  std::vector<Face> faces{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                          {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                          {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                          {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      points.push_back((points[i] + points[j]).normalized());
      const int idx = static_cast<int>(points.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(4 * faces.size());
    for (const Face& f : faces) {
      const int a = mid(f[0], f[1]);
      const int b = mid(f[1], f[2]);
      const int c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  for (Point& p : points) p = center + radius * p;
  return mesh::TriMesh(std::move(points), std::move(faces));
}

int delaunay_flip(const std::vector<Point>& points, std::vector<Face>& faces, int max_passes) {
  const std::uint64_t n = points.size();
  auto key = [n](int i, int j) {
    return static_cast<std::uint64_t>(std::min(i, j)) * n + static_cast<std::uint64_t>(std::max(i, j));
  };
  int total = 0;
  for (int pass = 0; pass < max_passes; ++pass) {
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    edges.reserve(3 * faces.size());
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      for (int c = 0; c < 3; ++c) {
        auto [it, inserted] = edges.try_emplace(key(faces[f][c], faces[f][(c + 1) % 3]), f, -1);
        if (!inserted) it->second.second = f;
      }
    }
    std::vector<bool> touched(faces.size(), false);
    int flips = 0;
    // Deterministic order: visit faces and their edges in index order.
    for (int f1 = 0; f1 < static_cast<int>(faces.size()); ++f1) {
      for (int c = 0; c < 3 && !touched[f1]; ++c) {
        const int i = faces[f1][c];
        const int j = faces[f1][(c + 1) % 3];
        const auto& pair = edges.at(key(i, j));
        const int f2 = pair.first == f1 ? pair.second : pair.first;
        if (f2 < 0 || touched[f2]) continue;
        if (!has_directed(faces[f2], j, i)) continue;  // inconsistent orientation
        const int k = opposite(faces[f1], i, j);
        const int l = opposite(faces[f2], i, j);
        const double weight = cot_at(points[k], points[i], points[j]) +
                              cot_at(points[l], points[i], points[j]);
        if (weight >= -1e-10) continue;
        if (edges.count(key(k, l))) continue;
        const Eigen::Vector3d before = face_normal(points[i], points[j], points[k]) +
                                       face_normal(points[j], points[i], points[l]);
        const Face g1{i, l, k};
        const Face g2{l, j, k};
        if (face_normal(points[g1[0]], points[g1[1]], points[g1[2]]).dot(before) <= 0.0 ||
            face_normal(points[g2[0]], points[g2[1]], points[g2[2]]).dot(before) <= 0.0) {
          continue;
        }
        faces[f1] = g1;
        faces[f2] = g2;
        edges.try_emplace(key(k, l), f1, f2);
        touched[f1] = touched[f2] = true;
        ++flips;
      }
    }
    total += flips;
    if (flips == 0) break;
  }
  return total;
}

}  // namespace spectone::harness
