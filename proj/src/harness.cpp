#include "spectone/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "spectone/errors.hpp"

namespace spectone::harness {

AdmissibilityReport admissibility(const mesh::ImmersedSurface& surface,
                                  const mesh::DiscreteLaplacian& lap,
                                  const comparison::ComparisonProfile& profile,
                                  std::optional<double> analytic_sup_h) {
  comparison::validate(profile);
  AdmissibilityReport report;
  report.threshold =
      comparison::threshold(profile.m, profile.ell, profile.curvature.b, profile.r);
  report.numerical_sup_h = mesh::mean_curvature(surface, lap).sup_interior;
  report.numerical_pass = report.numerical_sup_h < report.threshold;
  report.analytic_sup_h = analytic_sup_h;
  if (analytic_sup_h) report.analytic_pass = *analytic_sup_h < report.threshold;

  const double used = analytic_sup_h.value_or(report.numerical_sup_h);
  report.pass = used < report.threshold;
  report.margin = report.threshold - used;
  return report;
}

SweepReport exhaustion_sweep(const mesh::ImmersedSurface& surface,
                             const comparison::ComparisonProfile& profile,
                             const std::vector<double>& radii, const std::string& surface_name,
                             const spectral::SolverOptions& solver) {
  comparison::validate(profile);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < profile.r)) {
      throw DomainError("exhaustion radii must lie in (0, r); got r_i = " +
                        std::to_string(radii[i]));
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw DomainError("exhaustion radii must be strictly increasing");
    }
  }

  SweepReport report;
  report.profile = profile;
  report.surface_name = surface_name;
  report.admissible = profile.sup_h < comparison::threshold(profile.m, profile.ell,
                                                            profile.curvature.b, profile.r);

  for (double r_i : radii) {
    SweepRecord record;
    record.r_i = r_i;
    record.closed_form_bound = comparison::exterior_tone_bound(profile, r_i).value;
    try {
      const mesh::ExteriorRegion region = mesh::exterior_region(surface, r_i);
      const mesh::DiscreteLaplacian lap = mesh::assemble_laplacian(region.surface.mesh());
      record.free_vertex_count =
          region.surface.mesh().vertex_count() - static_cast<int>(region.dirichlet.size());
      if (record.free_vertex_count == 0) {
        record.note = "no free vertices";
      } else {
        const spectral::SpectralResult result =
            spectral::dirichlet_tone(lap, region.dirichlet, 1, solver);
        record.discrete_tone = result.eigenvalues[0];
      }
    } catch (const EmptyRegionError&) {
      record.note = "empty region";
    } catch (const SolverError& e) {
      record.note = e.what();
    } catch (const MeshError& e) {
      record.note = e.what();
    }
    report.records.push_back(std::move(record));
  }

  if (report.admissible) {
    for (std::size_t i = 1; i < report.records.size(); ++i) {
      if (!(report.records[i].closed_form_bound > report.records[i - 1].closed_form_bound)) {
        throw DomainError("closed-form exterior bound failed to increase with r_i");
      }
    }
  }
  return report;
}

BartaSummary barta_campaign(const mesh::ImmersedSurface& surface,
                            const comparison::ComparisonProfile& profile,
                            const DirichletPolicy& policy, int trials, std::uint64_t seed,
                            const spectral::SolverOptions& solver) {
  comparison::validate(profile);
  if (trials < 1) throw DomainError("barta campaign requires trials >= 1");

  std::optional<mesh::ExteriorRegion> region;
  if (policy.exterior_radius) region = mesh::exterior_region(surface, *policy.exterior_radius);
  const mesh::ImmersedSurface& domain = region ? region->surface : surface;
  const std::vector<int>& dirichlet = region ? region->dirichlet : domain.mesh().boundary_vertices();

  const mesh::DiscreteLaplacian lap = mesh::assemble_laplacian(domain.mesh());
  const spectral::SpectralResult ground = spectral::dirichlet_tone(lap, dirichlet, 1, solver);
  const int n = domain.mesh().vertex_count();

  BartaSummary summary;
  summary.lambda1 = ground.eigenvalues[0];
  summary.free_vertex_count = static_cast<int>(ground.free_vertices.size());
  summary.trials = trials;
  const double ceiling = summary.lambda1 + 1e-10;

  // Radial profile phi_a(rho); strictly positive since every vertex has rho < r.
  const Eigen::VectorXd rho = mesh::extrinsic_distance(domain);
  Eigen::VectorXd radial(n);
  for (int v = 0; v < n; ++v) {
    radial[v] = comparison::eval_phi(profile.curvature.a, profile.r, std::min(rho[v], profile.r));
  }
  const spectral::BartaCertificate radial_cert = spectral::barta_bound(lap, radial, dirichlet);
  summary.m_matrix_ok = radial_cert.m_matrix_ok;
  summary.radial_bound = radial_cert.bound;
  if (radial_cert.bound > ceiling) ++summary.violations;

  // The ground state is not a valid test function when it vanishes on some
  // component of a disconnected region.
  summary.ground_state_bound = std::numeric_limits<double>::quiet_NaN();
  try {
    summary.ground_state_bound =
        spectral::barta_bound(lap, ground.full_eigenvector(0, n), dirichlet).bound;
  } catch (const DomainError&) {
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  summary.random_min_bound = std::numeric_limits<double>::infinity();
  summary.random_max_bound = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd f = Eigen::VectorXd::Ones(n);
  for (int t = 0; t < trials; ++t) {
    for (int v : ground.free_vertices) f[v] = std::exp(normal(rng));
    const double bound = spectral::barta_bound(lap, f, dirichlet).bound;
    summary.random_min_bound = std::min(summary.random_min_bound, bound);
    summary.random_max_bound = std::max(summary.random_max_bound, bound);
    if (bound > ceiling) ++summary.violations;
  }
  summary.tightest_bound = std::max(summary.radial_bound, summary.random_max_bound);
  if (std::isfinite(summary.ground_state_bound)) {
    summary.tightest_bound = std::max(summary.tightest_bound, summary.ground_state_bound);
  }
  return summary;
}

}  // namespace spectone::harness
