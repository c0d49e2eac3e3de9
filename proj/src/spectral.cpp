#include "spectone/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "spectone/errors.hpp"

namespace spectone::spectral {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Positions of the free vertices in the full index space, -1 for Dirichlet.
std::vector<int> free_position(int n, const std::vector<int>& free) {
  std::vector<int> pos(n, -1);
  for (std::size_t k = 0; k < free.size(); ++k) pos[free[k]] = static_cast<int>(k);
  return pos;
}

SpMat restrict_stiffness(const SpMat& s, const std::vector<int>& pos, int free_count) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(s.nonZeros());
  for (int col = 0; col < s.outerSize(); ++col) {
    if (pos[col] < 0) continue;
    for (SpMat::InnerIterator it(s, col); it; ++it) {
      if (pos[it.row()] >= 0) triplets.emplace_back(pos[it.row()], pos[col], it.value());
    }
  }
  SpMat out(free_count, free_count);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

// Connected components of the free graph; also flags components with no
// edge to a Dirichlet vertex.
struct Components {
  std::vector<int> label;
  std::vector<bool> anchored;
};

Components free_components(const SpMat& s, const std::vector<int>& pos,
                           const std::vector<int>& free) {
  Components c;
  c.label.assign(free.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (std::size_t seed = 0; seed < free.size(); ++seed) {
    if (c.label[seed] >= 0) continue;
    bool anchored = false;
    c.label[seed] = next;
    stack.push_back(static_cast<int>(seed));
    while (!stack.empty()) {
      const int local = stack.back();
      stack.pop_back();
      for (SpMat::InnerIterator it(s, free[local]); it; ++it) {
        if (it.row() == free[local] || it.value() == 0.0) continue;
        const int nb = pos[it.row()];
        if (nb < 0) {
          anchored = true;
        } else if (c.label[nb] < 0) {
          c.label[nb] = next;
          stack.push_back(nb);
        }
      }
    }
    c.anchored.push_back(anchored);
    ++next;
  }
  return c;
}

// M-orthonormalize the columns of x against `locked` and each other
// (two passes of modified Gram-Schmidt). Columns that collapse are
// replaced with random vectors.
void m_orthonormalize(Eigen::MatrixXd& x, const Eigen::MatrixXd& locked, const Eigen::VectorXd& mass,
                      std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (int j = 0; j < x.cols(); ++j) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      const double before = std::sqrt(x.col(j).cwiseProduct(mass).dot(x.col(j)));
      for (int pass = 0; pass < 2; ++pass) {
        for (int l = 0; l < locked.cols(); ++l) {
          x.col(j) -= locked.col(l).cwiseProduct(mass).dot(x.col(j)) * locked.col(l);
        }
        for (int i = 0; i < j; ++i) {
          x.col(j) -= x.col(i).cwiseProduct(mass).dot(x.col(j)) * x.col(i);
        }
      }
      const double norm = std::sqrt(x.col(j).cwiseProduct(mass).dot(x.col(j)));
      if (norm > 1e-10 * before && norm > 0.0) {
        x.col(j) /= norm;
        break;
      }
      for (int r = 0; r < x.rows(); ++r) x(r, j) = normal(rng);
    }
  }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> u) {
  Eigen::Index idx = 0;
  u.cwiseAbs().maxCoeff(&idx);
  if (u[idx] < 0.0) u = -u;
}

}  // namespace

Eigen::VectorXd SpectralResult::full_eigenvector(int j, int vertex_count) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vertex_count);
  for (std::size_t k = 0; k < free_vertices.size(); ++k) out[free_vertices[k]] = eigenvectors(k, j);
  return out;
}

std::vector<int> free_vertices(int vertex_count, const std::vector<int>& dirichlet_set) {
  std::vector<bool> fixed(vertex_count, false);
  for (int v : dirichlet_set) {
    if (v < 0 || v >= vertex_count) {
      throw DomainError("Dirichlet vertex " + std::to_string(v) + " out of range");
    }
    fixed[v] = true;
  }
  std::vector<int> free;
  for (int v = 0; v < vertex_count; ++v) {
    if (!fixed[v]) free.push_back(v);
  }
  return free;
}

SpectralResult dirichlet_tone(const mesh::DiscreteLaplacian& lap,
                              const std::vector<int>& dirichlet_set, int k,
                              const SolverOptions& options) {
  const int n = lap.vertex_count();
  if (k < 1) throw DomainError("eigenpair count requires k >= 1, got " + std::to_string(k));

  SpectralResult result;
  result.free_vertices = free_vertices(n, dirichlet_set);
  const auto& free = result.free_vertices;
  const int nf = static_cast<int>(free.size());
  if (nf == 0) throw DomainError("no free vertices: every vertex is Dirichlet");
  k = std::min(k, nf);

  const std::vector<int> pos = free_position(n, free);
  const Components comps = free_components(lap.stiffness, pos, free);
  for (std::size_t c = 0; c < comps.anchored.size(); ++c) {
    if (!comps.anchored[c]) {
      throw SolverError(
          "restricted stiffness is singular: a connected component of free vertices "
          "touches no Dirichlet vertex");
    }
  }

  const SpMat s = restrict_stiffness(lap.stiffness, pos, nf);
  Eigen::VectorXd mass(nf);
  for (int i = 0; i < nf; ++i) mass[i] = lap.mass[free[i]];

  Eigen::SimplicialLDLT<SpMat> ldlt(s);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any()) {
    throw SolverError("LDL^T factorization of the restricted stiffness failed (not positive definite)");
  }

  // Two guard vectors beyond max(k, 4) keep the k-th pair converging when
  // lambda_k is (nearly) repeated.
  const int width = std::min(nf, std::max(k, 4) + 2);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd locked(nf, 0);
  std::vector<double> locked_values;
  Eigen::MatrixXd active(nf, width);
  for (int j = 0; j < width; ++j) {
    for (int i = 0; i < nf; ++i) active(i, j) = normal(rng);
  }
  m_orthonormalize(active, locked, mass, rng);

  auto residual_of = [&](const Eigen::VectorXd& u, double lambda) {
    const Eigen::VectorXd mu = mass.cwiseProduct(u);
    return (s * u - lambda * mu).norm() / mu.norm();
  };

  // Inverse iteration contracts at lambda_1 / lambda_{w+1}, which is close to 1
  // on thin regions. Once the Ritz values settle, shift the factorization just
  // below the lowest one; all-positive LDL^T pivots certify sigma < lambda_1.
  const SpMat mass_matrix = [&] {
    SpMat m(nf, nf);
    std::vector<Eigen::Triplet<double>> diag;
    for (int i = 0; i < nf; ++i) diag.emplace_back(i, i, mass[i]);
    m.setFromTriplets(diag.begin(), diag.end());
    return m;
  }();
  bool shifted = false;
  constexpr int kShiftAfter = 8;

  int it = 0;
  while (static_cast<int>(locked_values.size()) < k) {
    if (it >= options.max_iterations) {
      throw SolverError("dirichlet_tone: " + std::to_string(locked_values.size()) + " of " +
                        std::to_string(k) + " eigenpairs converged after " +
                        std::to_string(options.max_iterations) + " iterations");
    }
    ++it;
    Eigen::MatrixXd y(nf, active.cols());
    for (int j = 0; j < active.cols(); ++j) y.col(j) = ldlt.solve(mass.cwiseProduct(active.col(j)));
    m_orthonormalize(y, locked, mass, rng);

    // Rayleigh-Ritz on span(y); y is M-orthonormal so the projected pencil
    // is standard.
    Eigen::MatrixXd projected = y.transpose() * (s * y);
    projected = 0.5 * (projected + projected.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected);
    active = y * ritz.eigenvectors();
    const Eigen::VectorXd theta = ritz.eigenvalues();

    if (!shifted && it == kShiftAfter) {
      shifted = true;
      double lowest = theta[0];
      for (double v : locked_values) lowest = std::min(lowest, v);
      double step = 0.05 * (theta[theta.size() - 1] - theta[0]);
      bool accepted = false;
      for (int attempt = 0; attempt < 8 && step > 0.0 && !accepted; ++attempt, step *= 4.0) {
        const double sigma = lowest - step;
        if (sigma <= 0.0) break;
        ldlt.compute(SpMat(s - sigma * mass_matrix));
        accepted = ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all();
      }
      if (!accepted) ldlt.compute(s);
    }

    // Lock converged pairs from the bottom of the block only, so locked
    // values stay the smallest.
    int converged = 0;
    while (converged < active.cols() &&
           static_cast<int>(locked_values.size()) + converged < k &&
           residual_of(active.col(converged), theta[converged]) <= options.tol) {
      ++converged;
    }
    if (converged > 0) {
      Eigen::MatrixXd grown(nf, locked.cols() + converged);
      grown << locked, active.leftCols(converged);
      locked = std::move(grown);
      for (int j = 0; j < converged; ++j) locked_values.push_back(theta[j]);
      const int remaining = static_cast<int>(active.cols()) - converged;
      Eigen::MatrixXd rest = active.rightCols(remaining);
      active = std::move(rest);
      // Keep the block from shrinking below the guard size.
      const int want = std::min(nf - static_cast<int>(locked.cols()), width);
      if (active.cols() < want) {
        Eigen::MatrixXd padded(nf, want);
        padded.leftCols(active.cols()) = active;
        for (int j = static_cast<int>(active.cols()); j < want; ++j) {
          for (int i = 0; i < nf; ++i) padded(i, j) = normal(rng);
        }
        active = std::move(padded);
        m_orthonormalize(active, locked, mass, rng);
      }
    }
    if (active.cols() == 0) break;
  }
  result.iterations = it;

  // Order the locked pairs and report.
  std::vector<int> order(locked_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return locked_values[p] < locked_values[q]; });
  result.eigenvalues.resize(k);
  result.eigenvectors.resize(nf, k);
  result.residuals.resize(k);
  for (int j = 0; j < k; ++j) {
    result.eigenvalues[j] = locked_values[order[j]];
    result.eigenvectors.col(j) = locked.col(order[j]);
    fix_sign(result.eigenvectors.col(j));
    result.residuals[j] = residual_of(result.eigenvectors.col(j), result.eigenvalues[j]);
  }

  const Eigen::VectorXd u = result.eigenvectors.col(0);
  const double floor = 1e-12 * u.cwiseAbs().maxCoeff();
  const int ncomp = static_cast<int>(comps.anchored.size());
  std::vector<int> sign(ncomp, 0);
  result.ground_state_single_signed = true;
  for (int i = 0; i < nf; ++i) {
    if (std::abs(u[i]) <= floor) continue;
    const int sgn = u[i] > 0.0 ? 1 : -1;
    int& seen = sign[comps.label[i]];
    if (seen == 0) {
      seen = sgn;
    } else if (seen != sgn) {
      result.ground_state_single_signed = false;
    }
  }
  return result;
}

double rayleigh(const mesh::DiscreteLaplacian& lap, const Eigen::VectorXd& f,
                const std::vector<int>& dirichlet_set) {
  const int n = lap.vertex_count();
  if (f.size() != n) throw DomainError("test function size does not match the vertex count");
  const double scale = f.cwiseAbs().maxCoeff();
  for (int v : dirichlet_set) {
    if (v < 0 || v >= n) throw DomainError("Dirichlet vertex " + std::to_string(v) + " out of range");
    if (std::abs(f[v]) > 1e-14 * scale) {
      throw DomainError("test function must vanish on the Dirichlet set (vertex " +
                        std::to_string(v) + ")");
    }
  }
  Eigen::VectorXd g = f;
  for (int v : dirichlet_set) g[v] = 0.0;
  const double denom = g.cwiseProduct(lap.mass).dot(g);
  if (!(denom > 0.0)) throw DomainError("Rayleigh quotient has a zero denominator (f = 0)");
  return g.dot(lap.stiffness * g) / denom;
}

BartaCertificate barta_bound(const mesh::DiscreteLaplacian& lap, const Eigen::VectorXd& f,
                             const std::vector<int>& dirichlet_set) {
  const int n = lap.vertex_count();
  if (f.size() != n) throw DomainError("test function size does not match the vertex count");
  const std::vector<int> free = free_vertices(n, dirichlet_set);
  if (free.empty()) throw DomainError("no free vertices: every vertex is Dirichlet");
  const std::vector<int> pos = free_position(n, free);
  const int nf = static_cast<int>(free.size());

  BartaCertificate cert;
  cert.test_function.resize(nf);
  for (int i = 0; i < nf; ++i) {
    const double value = f[free[i]];
    if (!(value > 0.0)) {
      throw DomainError("Barta test function must be > 0 on free vertices (vertex " +
                        std::to_string(free[i]) + " has " + std::to_string(value) + ")");
    }
    cert.test_function[i] = value;
  }

  const SpMat s = restrict_stiffness(lap.stiffness, pos, nf);
  const Eigen::VectorXd sf = s * cert.test_function;
  cert.bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nf; ++i) {
    const double q = sf[i] / (lap.mass[free[i]] * cert.test_function[i]);
    if (q < cert.bound) {
      cert.bound = q;
      cert.argmin = i;
    }
  }

  cert.m_matrix_ok = true;
  const Eigen::VectorXd diag = s.diagonal();
  for (int col = 0; col < nf && cert.m_matrix_ok; ++col) {
    for (SpMat::InnerIterator it(s, col); it; ++it) {
      if (it.row() != col &&
          mesh::is_positive_off_diagonal(it.value(), std::max(diag[col], diag[it.row()]))) {
        cert.m_matrix_ok = false;
        break;
      }
    }
  }
  return cert;
}

}  // namespace spectone::spectral
