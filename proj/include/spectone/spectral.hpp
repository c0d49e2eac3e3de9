#pragma once

#include <vector>

#include <Eigen/Core>

#include "spectone/mesh.hpp"

namespace spectone::spectral {

struct SpectralResult {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // one column per pair, rows are free vertices
  Eigen::VectorXd residuals;     // |S u - lambda M u| / |M u|
  std::vector<int> free_vertices;
  int iterations = 0;
  /// First eigenvector has one sign on every connected component of the
  /// free vertices (entries below roundoff count as zero).
  bool ground_state_single_signed = false;

  /// Column `j` scattered back to all vertices, zero on the Dirichlet set.
  Eigen::VectorXd full_eigenvector(int j, int vertex_count) const;
};

struct SolverOptions {
  double tol = 1e-10;  // residual target, absolute units of lambda
  int max_iterations = 500;
  unsigned seed = 20240607;
};

/// Vertices not in `dirichlet_set`, ascending.
std::vector<int> free_vertices(int vertex_count, const std::vector<int>& dirichlet_set);

/// k smallest eigenpairs of S u = lambda M u with Dirichlet rows and columns
/// deleted. Shift-invert at 0 (sparse LDL^T of the restricted stiffness),
/// block inverse iteration with Rayleigh-Ritz and locking of converged pairs.
/// Each eigenvector is scaled to unit M-norm with its largest-magnitude entry
/// positive.
///
/// Throws SolverError when the restricted stiffness is singular (a free
/// component with no Dirichlet neighbour) or the iteration cap is reached.
SpectralResult dirichlet_tone(const mesh::DiscreteLaplacian& lap,
                              const std::vector<int>& dirichlet_set, int k,
                              const SolverOptions& options = {});

/// (f^T S f) / (f^T M f) for a per-vertex f vanishing on the Dirichlet set.
double rayleigh(const mesh::DiscreteLaplacian& lap, const Eigen::VectorXd& f,
                const std::vector<int>& dirichlet_set);

struct BartaCertificate {
  Eigen::VectorXd test_function;  // restricted to free vertices
  double bound = 0.0;             // min_i (S_ff f)_i / (M f)_i
  int argmin = -1;                // free-vertex position attaining the bound
  /// No positive off-diagonal in the restricted stiffness. When true,
  /// bound <= lambda_1 holds exactly; otherwise it is advisory.
  bool m_matrix_ok = false;
};

/// Matrix-level Barta bound. `f` is per-vertex and must be > 0 on all free
/// vertices; its Dirichlet values are ignored. Throws DomainError otherwise.
BartaCertificate barta_bound(const mesh::DiscreteLaplacian& lap, const Eigen::VectorXd& f,
                             const std::vector<int>& dirichlet_set);

}  // namespace spectone::spectral
