#include "spectone/comparison.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

#include "spectone/errors.hpp"

namespace spectone::comparison {

namespace {

// Below this |k| t^2 the closed forms are replaced by the series of
// x cot x, so that the three branches join continuously at k = 0.
constexpr double kSeriesCutoff = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

void check_c_domain(double k, double t) {
  require(std::isfinite(k), "curvature bound must be finite, got " + fmt(k));
  require(std::isfinite(t) && t > 0.0,
          "C_k(t) requires t > 0, got t = " + fmt(t));
  if (k > 0.0) {
    require(t < std::numbers::pi / std::sqrt(k),
            "C_k(t) requires t < pi/sqrt(k) for k > 0, got k = " + fmt(k) +
                ", t = " + fmt(t));
  }
}

void check_phi_domain(double a, double r, double t) {
  require(std::isfinite(a), "curvature bound a must be finite");
  require(std::isfinite(r) && r > 0.0, "ball radius r must be > 0, got " + fmt(r));
  require(std::isfinite(t) && t >= 0.0 && t <= r,
          "phi_a(t) requires 0 <= t <= r, got t = " + fmt(t) + ", r = " + fmt(r));
  if (a > 0.0) {
    require(r < convexity_radius(a),
            "phi_a requires r < pi/(2 sqrt(a)) for a > 0, got a = " + fmt(a) +
                ", r = " + fmt(r));
  }
}

}  // namespace

double convexity_radius(double k) {
  if (k <= 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / (2.0 * std::sqrt(k));
}

void validate(const CurvatureInterval& interval) {
  require(std::isfinite(interval.a) && std::isfinite(interval.b),
          "curvature bounds must be finite");
  require(interval.a <= interval.b,
          "curvature bounds require a <= b (a = inf K_rad, b = sup K_rad), got a = " +
              fmt(interval.a) + ", b = " + fmt(interval.b));
}

void validate(const ComparisonProfile& p) {
  validate(p.curvature);
  require(std::isfinite(p.r) && p.r > 0.0, "ball radius requires r > 0, got " + fmt(p.r));
  require(p.m >= 1, "submanifold dimension requires m >= 1, got " + std::to_string(p.m));
  require(p.ell >= 0, "Euclidean factor dimension requires ell >= 0, got " +
                          std::to_string(p.ell));
  require(p.m - p.ell >= 1, "cylinder case requires m >= ell + 1, got m = " +
                                std::to_string(p.m) + ", ell = " + std::to_string(p.ell));
  require(std::isfinite(p.sup_h) && p.sup_h >= 0.0,
          "sup |H| must be >= 0, got " + fmt(p.sup_h));
  require(p.r < convexity_radius(p.curvature.b),
          "r >= pi/(2 sqrt(b)): the ball radius must satisfy r < pi/(2 sqrt(b)), got r = " +
              fmt(p.r) + ", b = " + fmt(p.curvature.b));
}

double eval_c(double b, double t) {
  check_c_domain(b, t);
  const double z = b * t * t;
  if (std::abs(z) < kSeriesCutoff) {
    // x cot x = 1 - x^2/3 - x^4/45 - 2 x^6/945 - ..., x^2 = z
    return (1.0 - z / 3.0 - z * z / 45.0 - 2.0 * z * z * z / 945.0) / t;
  }
  if (b > 0.0) {
    const double s = std::sqrt(b);
    return s / std::tan(s * t);
  }
  const double s = std::sqrt(-b);
  return s / std::tanh(s * t);
}

double eval_phi(double a, double r, double t) {
  check_phi_domain(a, r, t);
  if (a > 0.0) {
    // cos(s t) - cos(s r), written as a product to keep the zero at t = r exact
    const double s = std::sqrt(a);
    return 2.0 * std::sin(0.5 * s * (r + t)) * std::sin(0.5 * s * (r - t));
  }
  if (a == 0.0) return (r - t) * (r + t);
  const double s = std::sqrt(-a);
  return 2.0 * std::sinh(0.5 * s * (r + t)) * std::sinh(0.5 * s * (r - t));
}

double eval_phi_prime(double a, double r, double t) {
  check_phi_domain(a, r, t);
  require(t > 0.0, "phi_a'(t) requires t > 0, got t = " + fmt(t));
  if (a > 0.0) {
    const double s = std::sqrt(a);
    return -s * std::sin(s * t);
  }
  if (a == 0.0) return -2.0 * t;
  const double s = std::sqrt(-a);
  return -s * std::sinh(s * t);
}

double threshold(int m, int ell, double b, double r) {
  require(ell >= 0, "Euclidean factor dimension requires ell >= 0, got " + std::to_string(ell));
  require(m - ell >= 1, "threshold requires m >= ell + 1, got m = " + std::to_string(m) +
                            ", ell = " + std::to_string(ell));
  return static_cast<double>(m - ell) * eval_c(b, r);
}

ExteriorBound exterior_tone_bound(const ComparisonProfile& profile, double r_i) {
  validate(profile);
  require(std::isfinite(r_i) && r_i > 0.0 && r_i < profile.r,
          "exhaustion radius requires 0 < r_i < r, got r_i = " + fmt(r_i) +
              ", r = " + fmt(profile.r));
  const double a = profile.curvature.a;
  ExteriorBound out;
  out.threshold = threshold(profile.m, profile.ell, profile.curvature.b, profile.r);
  out.admissible = profile.sup_h < out.threshold;
  const double log_slope =
      -eval_phi_prime(a, profile.r, r_i) / eval_phi(a, profile.r, r_i);
  out.value = log_slope * (out.threshold - profile.sup_h);
  return out;
}

HessianEnvelope hessian_envelope(const CurvatureInterval& interval, double t) {
  validate(interval);
  HessianEnvelope env;
  env.upper = eval_c(interval.a, t);
  env.lower = eval_c(interval.b, t);
  env.radial = 0.0;
  return env;
}

double jacobi_ratio(double k, double t, const JacobiOptions& options) {
  check_c_domain(k, t);

  // Dormand-Prince 5(4) tableau.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr std::array<double, 7> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84, 0.0};
  constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  using State = std::array<double, 2>;  // (A, A')
  auto rhs = [k](const State& y) { return State{y[1], -k * y[0]}; };
  auto axpy = [](const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [w, s] : terms) {
      out[0] += h * w * (*s)[0];
      out[1] += h * w * (*s)[1];
    }
    return out;
  };

  State y{0.0, 1.0};
  double x = 0.0;
  double h = std::min(t, 1e-3);
  int steps = 0;
  while (x < t) {
    if (++steps > options.max_steps) {
      throw SolverError("jacobi_ratio: step budget exhausted before reaching t = " + fmt(t));
    }
    if (x + h > t) h = t - x;
    const State k1 = rhs(y);
    const State k2 = rhs(axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        rhs(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = axpy(y, h, {{b5[0], &k1}, {b5[2], &k3}, {b5[3], &k4}, {b5[4], &k5},
                                 {b5[5], &k6}});
    const State k7 = rhs(y5);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * ((b5[0] - b4[0]) * k1[i] + (b5[2] - b4[2]) * k3[i] +
                            (b5[3] - b4[3]) * k4[i] + (b5[4] - b4[4]) * k5[i] +
                            (b5[5] - b4[5]) * k6[i] + (b5[6] - b4[6]) * k7[i]);
      const double scale =
          options.abs_tol + options.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / scale);
    }

    const bool accepted = err <= 1.0;
    if (accepted) {
      x += h;
      y = y5;
      if (t - x <= 1e-15 * t) break;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (!accepted && h < 1e-14 * t) {
      throw SolverError("jacobi_ratio: step size underflow at x = " + fmt(x));
    }
  }
  if (y[0] == 0.0) throw SolverError("jacobi_ratio: Jacobi field vanished at t = " + fmt(t));
  return y[1] / y[0];
}

}  // namespace spectone::comparison
