#pragma once

#include <stdexcept>
#include <string>

namespace spectone {

/// A numeric argument violates a hypothesis of the operation it feeds.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The exterior region of an exhaustion set contains no faces.
class EmptyRegionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid triangulation: bad indices, degenerate faces, non-manifold edges.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files or unreadable/unwritable paths.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization failure or non-convergence of an iterative method.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spectone
