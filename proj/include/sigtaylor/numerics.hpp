#pragma once

#include <cmath>

namespace sigtaylor {

/// Comparison slack for real-valued word degrees.
inline constexpr double kDegreeTol = 1e-9;

/// Fractional factorial x! = Gamma(x + 1).
inline double fractional_factorial(double x) { return std::tgamma(x + 1.0); }

/// Largest integer strictly below x; an integral x (within tol) maps to x - 1.
inline int strict_floor(double x, double tol = kDegreeTol) {
  const double f = std::floor(x);
  if (x - f <= tol) return static_cast<int>(f) - 1;
  return static_cast<int>(f);
}

/// Largest integer less than or equal to x, forgiving values a hair below an
/// integer (floor(2 - 1e-12) should be 2, not 1).
inline int lenient_floor(double x, double tol = kDegreeTol) {
  return static_cast<int>(std::floor(x + tol));
}

}  // namespace sigtaylor
