#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectone/comparison.hpp"
#include "spectone/generators.hpp"
#include "spectone/mesh.hpp"
#include "spectone/spectral.hpp"

namespace spectone::harness {

struct AdmissibilityReport {
  double threshold = 0.0;             // (m - ell) C_b(r)
  double numerical_sup_h = 0.0;       // interior sup |H| from the discrete Laplacian
  std::optional<double> analytic_sup_h;
  bool numerical_pass = false;
  std::optional<bool> analytic_pass;
  /// Verdict from the analytic value when known, else from the numerical one.
  bool pass = false;
  /// threshold - sup |H| (the sup used for `pass`).
  double margin = 0.0;
};

/// Compares sup |H| with the mean-curvature threshold of `profile`.
AdmissibilityReport admissibility(const mesh::ImmersedSurface& surface,
                                  const mesh::DiscreteLaplacian& lap,
                                  const comparison::ComparisonProfile& profile,
                                  std::optional<double> analytic_sup_h = std::nullopt);

struct SweepRecord {
  double r_i = 0.0;
  double closed_form_bound = 0.0;
  std::optional<double> discrete_tone;  // absent for empty or unsolvable regions
  int free_vertex_count = 0;
  std::string note;  // why the tone is absent, empty otherwise
};

struct SweepReport {
  std::vector<SweepRecord> records;
  comparison::ComparisonProfile profile;
  std::string surface_name;
  bool admissible = false;  // profile.sup_h < threshold
};

/// Closed-form exterior bounds and discrete Dirichlet tones of the face-based
/// exteriors, one record per radius. Region and solver failures are recorded
/// per record. Throws DomainError when radii are not strictly increasing in
/// (0, r) or the closed-form bounds of an admissible profile fail to increase.
SweepReport exhaustion_sweep(const mesh::ImmersedSurface& surface,
                             const comparison::ComparisonProfile& profile,
                             const std::vector<double>& radii, const std::string& surface_name,
                             const spectral::SolverOptions& solver = {});

/// Which vertices are clamped in a Barta campaign.
struct DirichletPolicy {
  /// Clamp the mesh boundary only when absent; otherwise work on the
  /// exterior region of this exhaustion radius.
  std::optional<double> exterior_radius;
};

struct BartaSummary {
  double lambda1 = 0.0;
  bool m_matrix_ok = false;
  double radial_bound = 0.0;        // f = phi_a(rho)
  double ground_state_bound = 0.0;  // f = first Dirichlet eigenvector
  int trials = 0;
  double random_min_bound = 0.0;
  double random_max_bound = 0.0;
  int violations = 0;        // random or radial bounds above lambda1 + 1e-10
  double tightest_bound = 0.0;  // best certified lower bound among all trials
  int free_vertex_count = 0;
};

/// Runs barta_bound with the radial profile phi_a o rho, the discrete ground
/// state and `trials` random test functions exp(N(0,1)) drawn from `seed`.
BartaSummary barta_campaign(const mesh::ImmersedSurface& surface,
                            const comparison::ComparisonProfile& profile,
                            const DirichletPolicy& policy, int trials, std::uint64_t seed,
                            const spectral::SolverOptions& solver = {});

}  // namespace spectone::harness
