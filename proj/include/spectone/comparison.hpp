#pragma once

// Closed-form comparison machinery for fundamental tones of exterior domains
// of bounded immersed submanifolds.
//
// Conventions:
//   C_k(t)      log-derivative of the constant-curvature Jacobi field,
//               sqrt(k) cot(sqrt(k) t), 1/t or sqrt(-k) coth(sqrt(-k) t).
//   phi_a(t)    radial test profile vanishing at the ball radius r.
//   H           mean curvature vector as the unnormalized trace of the second
//               fundamental form (|H| = 2/R on a round 2-sphere of radius R).
//
// All functions are pure. Preconditions are checked and reported as
// spectone::DomainError with a message naming the violated hypothesis.
// The injectivity-radius hypothesis r < inj_N(p) cannot be checked here and
// is the caller's obligation.

#include <string>

namespace spectone::comparison {

struct CurvatureInterval {
  double a = 0.0;  // lower bound of the radial sectional curvature
  double b = 0.0;  // upper bound of the radial sectional curvature
};

struct ComparisonProfile {
  CurvatureInterval curvature;
  double r = 1.0;      // ball radius
  int m = 2;           // submanifold dimension
  int ell = 0;         // dimension of the Euclidean factor (0: ball case)
  double sup_h = 0.0;  // sup of |H|, trace convention
};

/// Hessian bounds for the ambient distance function at distance t.
/// lower = C_b(t), upper = C_a(t); the radial direction is always 0.
struct HessianEnvelope {
  double lower = 0.0;
  double upper = 0.0;
  double radial = 0.0;
};

struct ExteriorBound {
  double value = 0.0;
  double threshold = 0.0;
  bool admissible = false;  // sup_h < threshold
};

/// pi / (2 sqrt(k)) for k > 0, +infinity otherwise.
double convexity_radius(double k);

/// Throws DomainError unless a <= b.
void validate(const CurvatureInterval& interval);

/// Throws DomainError naming the first violated hypothesis of the profile:
/// a <= b, r > 0, m >= 1, ell >= 0, m - ell >= 1, sup_h >= 0 and
/// r < pi/(2 sqrt(b)).
void validate(const ComparisonProfile& profile);

double eval_c(double b, double t);

double eval_phi(double a, double r, double t);

/// Derivative of eval_phi in t. Requires 0 < t <= r.
double eval_phi_prime(double a, double r, double t);

/// (m - ell) * C_b(r). With ell = 0 this is the ball-case threshold m C_b(r).
double threshold(int m, int ell, double b, double r);

/// -(phi_a'(r_i) / phi_a(r_i)) * [(m - ell) C_b(r) - sup_h].
///
/// The bound is returned even when sup_h >= threshold; `admissible` records
/// whether the mean-curvature hypothesis holds. Requires 0 < r_i < r.
ExteriorBound exterior_tone_bound(const ComparisonProfile& profile, double r_i);

HessianEnvelope hessian_envelope(const CurvatureInterval& interval, double t);

struct JacobiOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_steps = 1000000;
};

/// Integrates A'' + k A = 0, A(0) = 0, A'(0) = 1 with an adaptive
/// Dormand-Prince 5(4) scheme and returns A'(t) / A(t).
///
/// Independent of eval_c: it never evaluates a trigonometric closed form.
/// Throws SolverError when the step size underflows or the step budget runs
/// out.
double jacobi_ratio(double k, double t, const JacobiOptions& options = {});

}  // namespace spectone::comparison
