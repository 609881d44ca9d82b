#pragma once

#include <cmath>
#include <complex>

#include "pshlab/common.hpp"

namespace pshlab {

/// Poisson kernel P(z, e^{i theta}) = (1 - |z|^2) / |e^{i theta} - z|^2.
/// Requires |z| < 1.
inline double poisson(Complex z, double theta) {
  if (!in_open_disk(z)) domain_fail("poisson: point must lie in the open disk");
  const Complex e = unit_circle(theta);
  const double d2 = std::norm(e - z);
  return one_minus_sq_abs(z) / d2;
}

/// Poisson kernel at a point s = 1 - gap on the positive real axis, written
/// in terms of the boundary gap so that no digits cancel when both gap and
/// theta are tiny:  |e^{i theta} - s|^2 = gap^2 + 4 s sin^2(theta/2).
inline double poisson_axis(double gap, double theta) {
  const double s = 1.0 - gap;
  const double si = std::sin(0.5 * theta);
  const double d2 = gap * gap + 4.0 * s * si * si;
  return gap * (2.0 - gap) / d2;
}

/// Green kernel G(z, w) = log|(z - w)/(1 - conj(w) z)| < 0.
///
/// Evaluated as (1/2) log1p(-(1-|z|^2)(1-|w|^2)/|1 - conj(w) z|^2), which is
/// an exact rearrangement (|z-w|^2 - |1-conj(w)z|^2 = -(1-|z|^2)(1-|w|^2))
/// and keeps full accuracy when both points approach the boundary.
/// Returns -inf at z == w.
inline double green(Complex z, Complex w) {
  if (!in_open_disk(z) || !in_open_disk(w))
    domain_fail("green: both points must lie in the open disk");
  if (z == w) return -kInf;
  const double num = one_minus_sq_abs(z) * one_minus_sq_abs(w);
  const double den = std::norm(1.0 - std::conj(w) * z);
  return 0.5 * std::log1p(-num / den);
}

/// Same kernel with both points on the real axis, parameterized by the
/// boundary gaps 1-t and 1-s (t = 1-tgap, s = 1-sgap).  Everything is formed
/// from the gaps directly (1 - st = tgap + sgap - tgap sgap), so the kernel
/// keeps full accuracy for gaps far below machine epsilon.
inline double green_axis(double tgap, double sgap) {
  if (tgap == sgap) return -kInf;
  const double num = tgap * (2.0 - tgap) * sgap * (2.0 - sgap);
  const double one_minus_st = tgap + sgap - tgap * sgap;
  return 0.5 * std::log1p(-num / (one_minus_st * one_minus_st));
}

/// Green kernel between z = (1 - zgap) e^{i theta} and the axis point
/// s = 1 - sgap, in gap coordinates throughout:
///   1 - s z = (1 - rho) + rho (1 - cos theta) - i rho sin theta,
/// with rho = s (1 - zgap) and 1 - rho formed from the gaps directly.
/// Stable for both points near the boundary, but NOT near s = |z|: there
/// 1 - num/den cancels; quadrature toward the singular radius must use
/// green_axis_offset instead.
inline double green_axis_point(double zgap, double theta, double sgap) {
  const double num = zgap * (2.0 - zgap) * sgap * (2.0 - sgap);
  const double one_minus_rho = zgap + sgap - zgap * sgap;
  const double rho = (1.0 - sgap) * (1.0 - zgap);
  const double si = std::sin(0.5 * theta);
  const double re = one_minus_rho + rho * 2.0 * si * si;
  const double im = rho * std::sin(theta);
  const double den = re * re + im * im;
  if (den == 0.0) return -kInf;
  const double ratio = num / den;
  if (ratio >= 1.0) return -kInf;
  return 0.5 * std::log1p(-ratio);
}

/// Same kernel with the axis point given by its exact radial offset from
/// |z|: sgap = zgap + dv. Both squared distances become sums of positive
/// terms,
///   |z - s|^2   = dv^2 + 4 r s sin^2(theta/2),
///   |1 - s z|^2 = (zgap + sgap - zgap sgap)^2 + 4 r s sin^2(theta/2),
/// so the logarithmic singularity at dv -> 0 keeps full precision however
/// small the offset.
inline double green_axis_offset(double zgap, double theta, double dv) {
  const double sgap = zgap + dv;
  const double r = 1.0 - zgap;
  const double s = 1.0 - sgap;
  const double si = std::sin(0.5 * theta);
  const double cross = 4.0 * r * s * si * si;
  const double num = dv * dv + cross;
  if (num == 0.0) return -kInf;
  const double omts = zgap + sgap - zgap * sgap;
  const double den = omts * omts + cross;
  // den - num = (1-|z|^2)(1-s^2) exactly; far from the singular radius the
  // kernel is a tiny difference of two near-equal logs, which would round
  // to zero, so switch to log1p of the exact ratio there
  const double diff = zgap * (2.0 - zgap) * sgap * (2.0 - sgap);
  if (diff <= 0.5 * den) return 0.5 * std::log1p(-diff / den);
  return 0.5 * (std::log(num) - std::log(den));
}

/// Herglotz kernel (e^{i theta} + z)/(e^{i theta} - z); its real part is the
/// Poisson kernel and its value at z = 0 is 1.
inline Complex herglotz(Complex z, double theta) {
  if (!in_open_disk(z)) domain_fail("herglotz: point must lie in the open disk");
  const Complex e = unit_circle(theta);
  return (e + z) / (e - z);
}

/// Derivative of the Herglotz kernel in z: 2 e^{i theta}/(e^{i theta} - z)^2.
inline Complex herglotz_dz(Complex z, double theta) {
  if (!in_open_disk(z)) domain_fail("herglotz_dz: point must lie in the open disk");
  const Complex e = unit_circle(theta);
  const Complex d = e - z;
  return 2.0 * e / (d * d);
}

/// Single Blaschke factor (-conj(a)/|a|) (z - a)/(1 - conj(a) z) for a zero
/// a with 0 < |a| < 1.  z may lie on the closed disk.  The value at z = 0 is
/// |a|; an m-fold zero at the origin is the monomial z^m and is rejected here.
inline Complex blaschke_factor(Complex z, Complex a) {
  const double aa = std::abs(a);
  if (aa == 0.0)
    domain_fail("blaschke_factor: zero at the origin; use the monomial z^m");
  if (aa >= 1.0)
    domain_fail("blaschke_factor: zero must lie in the open disk");
  return (-std::conj(a) / aa) * (z - a) / (1.0 - std::conj(a) * z);
}

/// Derivative of the factor above: (-conj(a)/|a|) (1 - |a|^2)/(1 - conj(a) z)^2.
inline Complex blaschke_factor_dz(Complex z, Complex a) {
  const double aa = std::abs(a);
  if (aa == 0.0 || aa >= 1.0)
    domain_fail("blaschke_factor_dz: zero must satisfy 0 < |a| < 1");
  const Complex d = 1.0 - std::conj(a) * z;
  return (-std::conj(a) / aa) * one_minus_sq_abs(a) / (d * d);
}

}  // namespace pshlab
