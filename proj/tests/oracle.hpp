#pragma once

// Slow reference integrators, structurally independent of the adaptive
// Gauss-Kronrod engine: fixed dyadic grading toward singular endpoints with
// composite Gauss-Legendre panels, and plain high-order trapezoid sums.
// Values frozen into tests come from these.

#include <pshlab/common.hpp>

#include <cmath>
#include <vector>

namespace oracle {

inline constexpr double kGlX[4] = {0.1834346424956498, 0.5255324099163290,
                                   0.7966664774136267, 0.9602898564975363};
inline constexpr double kGlW[4] = {0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};

template <class F>
double gl_panels(const F& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double c = lo + (i + 0.5) * h;
    const double r = 0.5 * h;
    for (int j = 0; j < 4; ++j)
      s += kGlW[j] * (f(c - r * kGlX[j]) + f(c + r * kGlX[j]));
  }
  return s * 0.5 * h;
}

/// Integral of f over (0, L] with dyadic cells [L 2^{-k-1}, L 2^{-k}] graded
/// toward the (possibly singular) endpoint 0; the variable is the exact
/// offset. The dropped tail below L 2^{-levels} must be negligible at the
/// comparison tolerance (for x^{-e} it is of order (2^{-levels})^{1-e}).
template <class F>
double graded_one_sided(const F& f, double L, int levels = 400,
                        int panels = 8) {
  double total = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double hi = L * std::ldexp(1.0, -k);
    const double lo = 0.5 * hi;
    total += gl_panels(f, lo, hi, panels);
  }
  return total;
}

/// Integral of f over [a, b] graded toward both endpoints.
template <class F>
double graded_both(const F& f, double a, double b, int levels = 400,
                   int panels = 8) {
  const double mid = 0.5 * (b - a);
  return graded_one_sided([&](double x) { return f(a + x); }, mid, levels,
                          panels) +
         graded_one_sided([&](double x) { return f(b - x); }, mid, levels,
                          panels);
}

/// Circle integral against lambda for an integrand singular at angle 0 only;
/// g is called with signed angles so both approaches stay exact.
template <class G>
double graded_circle_sing0(const G& g, int levels = 400, int panels = 8) {
  const double s =
      graded_one_sided([&](double x) { return g(x); }, pshlab::kPi, levels,
                       panels) +
      graded_one_sided([&](double x) { return g(-x); }, pshlab::kPi, levels,
                       panels);
  return s / pshlab::kTwoPi;
}

/// Plain trapezoid circle mean (lambda-normalized) for smooth integrands.
template <class G>
double trap_circle(const G& g, int n = 1 << 16) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += g(pshlab::kTwoPi * double(k) / double(n));
  return s / double(n);
}

}  // namespace oracle
