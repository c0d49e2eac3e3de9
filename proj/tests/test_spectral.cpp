#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "spectone/errors.hpp"
#include "spectone/generators.hpp"
#include "spectone/mesh.hpp"
#include "spectone/spectral.hpp"

using namespace spectone::spectral;
using spectone::DomainError;
using spectone::SolverError;
using spectone::mesh::assemble_laplacian;
using spectone::mesh::DiscreteLaplacian;
using spectone::mesh::ImmersedSurface;
using spectone::mesh::Point;
using spectone::mesh::TriMesh;
using std::numbers::pi;

namespace {

constexpr double kUnitDisk = 1.0 - 1e-6;

ImmersedSurface disk(double resolution, std::vector<double> conforming = {}) {
  spectone::harness::GeneratorSpec spec;
  spec.kind = spectone::harness::GeneratorKind::kFlatDisk;
  spec.resolution = resolution;
  spec.disk_radius = kUnitDisk;
  spec.conforming_radii = std::move(conforming);
  return spectone::harness::generate(spec).surface;
}

Eigen::VectorXd one_minus_rho2(const TriMesh& mesh) {
  Eigen::VectorXd f(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) f[v] = 1.0 - mesh.vertices()[v].squaredNorm();
  return f;
}

}  // namespace

TEST_CASE("free vertices") {
  CHECK(free_vertices(5, {3, 0}) == std::vector<int>{1, 2, 4});
  CHECK(free_vertices(3, {}) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(free_vertices(3, {3}), DomainError);
}

TEST_CASE("unit disk fundamental tone matches the Bessel zero") {
  const ImmersedSurface d = disk(0.03);
  const DiscreteLaplacian lap = assemble_laplacian(d.mesh());
  const SpectralResult res = dirichlet_tone(lap, d.mesh().boundary_vertices(), 1);
  const double j = oracle::j0_first_zero();
  CHECK(j == doctest::Approx(2.404826).epsilon(1e-6));
  CHECK(res.eigenvalues[0] == doctest::Approx(j * j).epsilon(0.01));
  CHECK(res.residuals[0] <= 1e-8);
  CHECK(res.ground_state_single_signed);
}

TEST_CASE("unit square spectrum") {
  const TriMesh grid = spectone::harness::square_grid(48, 1.0);
  const DiscreteLaplacian lap = assemble_laplacian(grid);
  const SpectralResult res = dirichlet_tone(lap, grid.boundary_vertices(), 6);
  REQUIRE(res.eigenvalues.size() == 6);
  const double expected[] = {2, 5, 5, 8, 10, 10};
  for (int i = 0; i < 6; ++i) {
    CHECK(res.eigenvalues[i] == doctest::Approx(expected[i] * pi * pi).epsilon(0.03));
    CHECK(res.residuals[i] <= 1e-8);
    if (i > 0) CHECK(res.eigenvalues[i] >= res.eigenvalues[i - 1]);
  }
  CHECK(res.eigenvalues[0] == doctest::Approx(2 * pi * pi).epsilon(0.01));
}

TEST_CASE("eigenvectors are M-orthonormal with a positive largest entry") {
  const TriMesh grid = spectone::harness::square_grid(20, 1.0);
  const DiscreteLaplacian lap = assemble_laplacian(grid);
  const SpectralResult res = dirichlet_tone(lap, grid.boundary_vertices(), 4);
  Eigen::VectorXd m(res.free_vertices.size());
  for (std::size_t i = 0; i < res.free_vertices.size(); ++i) m[i] = lap.mass[res.free_vertices[i]];
  const Eigen::MatrixXd gram = res.eigenvectors.transpose() * m.asDiagonal() * res.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
  for (int j = 0; j < 4; ++j) {
    Eigen::Index at = 0;
    res.eigenvectors.col(j).cwiseAbs().maxCoeff(&at);
    CHECK(res.eigenvectors(at, j) > 0.0);
  }
  const Eigen::VectorXd full = res.full_eigenvector(0, grid.vertex_count());
  for (int v : grid.boundary_vertices()) CHECK(full[v] == 0.0);
}

TEST_CASE("annulus tone matches the radial oracle") {
  const ImmersedSurface d = disk(0.03, {0.5});
  const auto region = spectone::mesh::exterior_region(d, 0.5);
  const DiscreteLaplacian lap = assemble_laplacian(region.surface.mesh());
  const SpectralResult res = dirichlet_tone(lap, region.dirichlet, 1);
  const double reference = oracle::annulus_tone(0.5 + 1e-9, kUnitDisk);
  CHECK(res.eigenvalues[0] == doctest::Approx(reference).epsilon(0.01));
  CHECK(res.ground_state_single_signed);
}

TEST_CASE("adding Dirichlet vertices never lowers the tone") {
  const ImmersedSurface d = disk(0.05);
  double prev = 0.0;
  for (double r : {0.05, 0.2, 0.4, 0.6, 0.8}) {
    const auto region = spectone::mesh::exterior_region(d, r);
    const double lambda =
        dirichlet_tone(assemble_laplacian(region.surface.mesh()), region.dirichlet, 1).eigenvalues[0];
    CHECK(lambda >= prev);
    prev = lambda;
  }
}

TEST_CASE("solver failure modes") {
  const TriMesh sphere = spectone::harness::icosphere(2, 1.0, Point::Zero());
  const DiscreteLaplacian lap = assemble_laplacian(sphere);
  // A closed surface without Dirichlet vertices has a constant null vector.
  CHECK_THROWS_AS(dirichlet_tone(lap, {}, 1), SolverError);
  std::vector<int> all(sphere.vertex_count());
  for (int v = 0; v < sphere.vertex_count(); ++v) all[v] = v;
  CHECK_THROWS_AS(dirichlet_tone(lap, all, 1), DomainError);
  CHECK_THROWS_AS(dirichlet_tone(lap, {0}, 0), DomainError);
  SolverOptions tight;
  tight.max_iterations = 1;
  tight.tol = 1e-15;
  CHECK_THROWS_AS(dirichlet_tone(lap, {0}, 3, tight), SolverError);
}

TEST_CASE("Rayleigh quotient") {
  const ImmersedSurface d = disk(0.03);
  const TriMesh& mesh = d.mesh();
  const DiscreteLaplacian lap = assemble_laplacian(mesh);
  const auto& boundary = mesh.boundary_vertices();
  const SpectralResult res = dirichlet_tone(lap, boundary, 1);
  const double lambda = res.eigenvalues[0];

  const Eigen::VectorXd u = res.full_eigenvector(0, mesh.vertex_count());
  CHECK(rayleigh(lap, u, boundary) == doctest::Approx(lambda).epsilon(1e-8));

  Eigen::VectorXd f = one_minus_rho2(mesh);
  for (int v : boundary) f[v] = 0.0;
  const double q = rayleigh(lap, f, boundary);
  CHECK(q >= lambda - 1e-10);
  CHECK(q <= 6.1);
  CHECK(rayleigh(lap, -3.5 * f, boundary) == doctest::Approx(q).epsilon(1e-14));

  Eigen::VectorXd bad = one_minus_rho2(mesh).array() + 0.5;
  CHECK_THROWS_AS(rayleigh(lap, bad, boundary), DomainError);
  CHECK_THROWS_AS(rayleigh(lap, Eigen::VectorXd::Zero(mesh.vertex_count()), boundary), DomainError);
}

TEST_CASE("discrete Barta bound") {
  const ImmersedSurface d = disk(0.03);
  const TriMesh& mesh = d.mesh();
  const DiscreteLaplacian lap = assemble_laplacian(mesh);
  const auto& boundary = mesh.boundary_vertices();
  const SpectralResult res = dirichlet_tone(lap, boundary, 1);
  const double lambda = res.eigenvalues[0];

  const BartaCertificate radial = barta_bound(lap, one_minus_rho2(mesh), boundary);
  CHECK(radial.m_matrix_ok);
  CHECK(radial.bound == doctest::Approx(4.0).epsilon(0.05));
  CHECK(radial.bound <= lambda);

  const BartaCertificate ground = barta_bound(lap, res.full_eigenvector(0, mesh.vertex_count()), boundary);
  CHECK(std::abs(ground.bound - lambda) <= 1e-8 * lambda);

  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd f(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) f[v] = std::exp(normal(rng));
    const BartaCertificate c = barta_bound(lap, f, boundary);
    CHECK(std::isfinite(c.bound));
    CHECK(c.bound <= lambda + 1e-10);
  }

  Eigen::VectorXd f = one_minus_rho2(mesh);
  f[mesh.vertex_count() / 2] = 0.0;
  if (!mesh.is_boundary(mesh.vertex_count() / 2)) CHECK_THROWS_AS(barta_bound(lap, f, boundary), DomainError);
}

TEST_CASE("obtuse meshes are flagged advisory") {
  // Both angles opposite the edge 0-1 are obtuse, so S_01 > 0.
  const TriMesh mesh({Point(0, 0, 0), Point(2, 0, 0), Point(1, 0.2, 0), Point(1, -0.2, 0)},
                     {{0, 1, 2}, {1, 0, 3}});
  const DiscreteLaplacian lap = assemble_laplacian(mesh);
  CHECK(lap.positive_off_diagonals == 1);
  const BartaCertificate advisory = barta_bound(lap, Eigen::VectorXd::Ones(4), {2, 3});
  CHECK_FALSE(advisory.m_matrix_ok);
  // Clamping one end of the bad edge removes it from the free block.
  const BartaCertificate clean = barta_bound(lap, Eigen::VectorXd::Ones(4), {1, 2, 3});
  CHECK(clean.m_matrix_ok);
}
