#pragma once

#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pshlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fixed measure/operator conventions used by every module.
///
/// lambda is the normalized arc measure dtheta/(2*pi) on the unit circle, and
/// the Laplacian is rescaled so that log|z - a| has unit point mass at a:
/// lap~ = (classical Laplacian) / (2*pi), taken against plain area measure.
/// With u(z) = log|z| this makes the limit boundary measure equal lambda.
struct Normalization {
  static constexpr bool lambda_is_normalized = true;
  static constexpr double laplacian_scale = 1.0 / kTwoPi;
};

/// 1 - |z|^2, with the two-factor form kept so near-boundary values keep
/// their leading digits.
inline double one_minus_sq_abs(Complex z) {
  const double a = std::abs(z);
  return (1.0 - a) * (1.0 + a);
}

inline bool in_open_disk(Complex z) { return std::abs(z) < 1.0; }

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  // fmod can return 2*pi itself after rounding
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

/// Distance between two angles on the circle, in [0, pi].
inline double angle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return d > kPi ? kTwoPi - d : d;
}

inline Complex unit_circle(double theta) {
  return Complex(std::cos(theta), std::sin(theta));
}

/// A disk point carried as (gap, theta) with z = (1-gap) e^{i theta}.
///
/// Quadrature drives gap (and theta, near angle 0) far below 1e-16 when it
/// resolves strong boundary singularities; forming z first and subtracting
/// would erase those digits, so the exact accessors below are the ones every
/// boundary-sensitive evaluation must use. gap = 0 is the boundary itself.
struct DiskPoint {
  double gap = 0.0;
  double theta = 0.0;

  double radius() const { return 1.0 - gap; }
  Complex z() const { return (1.0 - gap) * unit_circle(theta); }

  /// 1 - z without cancellation at small gap and small theta.
  Complex one_minus_z() const {
    const double r = 1.0 - gap;
    const double s = std::sin(0.5 * theta);
    return Complex(gap + r * 2.0 * s * s, -r * std::sin(theta));
  }

  /// 1 - |z|^2 = gap (2 - gap).
  double one_minus_sq() const { return gap * (2.0 - gap); }

  bool interior() const { return gap > 0.0 && gap <= 1.0; }

  static DiskPoint from(Complex z) {
    return DiskPoint{1.0 - std::abs(z), std::arg(z)};
  }
};

[[noreturn]] inline void domain_fail(const std::string& what) {
  throw std::domain_error(what);
}

}  // namespace pshlab
