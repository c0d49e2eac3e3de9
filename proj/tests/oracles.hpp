#pragma once

// Test-only reference values. Nothing here calls into the library, so each
// oracle checks the library from the outside.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_dec_float_50;

inline double coth(double t) {
  const Big x(t);
  const Big ep = exp(x);
  const Big em = exp(-x);
  return static_cast<double>((ep + em) / (ep - em));
}

inline double cot(double t) {
  const Big x(t);
  return static_cast<double>(cos(x) / sin(x));
}

inline double cos_diff(double a, double b) {
  return static_cast<double>(cos(Big(a)) - cos(Big(b)));
}

// J0 by its power series, summed in 50-digit arithmetic so the alternating
// terms do not cancel away the answer near the first zero.
inline Big bessel_j0(const Big& x) {
  const Big q = x * x / 4;
  Big term = 1;
  Big sum = 1;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (Big(k) * k);
    sum += term;
    if (abs(term) < Big("1e-45")) break;
  }
  return sum;
}

// First positive zero of J0 by bisection on [2, 3].
inline double j0_first_zero() {
  Big lo = 2;
  Big hi = 3;
  for (int i = 0; i < 120; ++i) {
    const Big mid = (lo + hi) / 2;
    if (bessel_j0(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>((lo + hi) / 2);
}

// Smallest eigenvalue of -(rho u')' = lambda rho u on [inner, outer] with
// u = 0 at both ends: conservative second-order differences, symmetrized and
// located by Sturm-sequence bisection.
inline double annulus_tone(double inner, double outer, int intervals = 20000) {
  const double h = (outer - inner) / intervals;
  const int n = intervals - 1;
  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
  for (int j = 0; j < n; ++j) {
    const double rho = inner + (j + 1) * h;
    const double left = rho - 0.5 * h;
    const double right = rho + 0.5 * h;
    diag[j] = (left + right) / (h * h * rho);
    if (j + 1 < n) {
      const double rho_next = rho + h;
      off[j] = -right / (h * h * std::sqrt(rho * rho_next));
    }
  }
  auto count_below = [&](double x) {
    int count = 0;
    double d = 1.0;
    for (int j = 0; j < n; ++j) {
      const double o2 = j > 0 ? off[j - 1] * off[j - 1] : 0.0;
      d = diag[j] - x - (j > 0 ? o2 / d : 0.0);
      if (d == 0.0) d = -1e-300;
      if (d < 0.0) ++count;
    }
    return count;
  };
  double lo = 0.0;
  double hi = 4.0 * diag[0];
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double central_first(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_second(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace oracle
