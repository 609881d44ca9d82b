#pragma once

// Deterministic adaptive quadrature: Gauss-Kronrod 7-15 with depth-first
// bisection on intervals, endpoint de-singularization by power substitution,
// a periodic trapezoid / split-arc rule on the circle, and a polar product
// rule on the disk. Divergence is decided from exponent metadata by callers;
// the rules here only ever integrate what is integrable.

#include <pshlab/common.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace pshlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes_used = 0;
  bool converged = false;
};

/// Endpoint behaviour of an integrand: |x - x0|^{-exponent}, optionally times
/// log|x - x0|. exponent < 1 is required (integrable); divergence verdicts are
/// made upstream from the same metadata before any rule is invoked.
struct EndpointSpec {
  double exponent = 0.0;
  bool log_factor = false;

  bool trivial() const { return exponent <= 0.0 && !log_factor; }
};

struct AngularSingularity {
  double theta = 0.0;
  double exponent = 0.0;
  bool log_factor = false;
};

enum class Verdict { finite, divergent };

struct CircleResult {
  Verdict verdict = Verdict::finite;
  QuadratureResult quad;
};

struct QuadratureOptions {
  double tol = 1e-8;
  std::size_t node_budget = std::size_t{1} << 20;
  int max_depth = 48;
  /// Leaves whose error estimate is below this fraction of their own value are
  /// accepted: splitting cannot beat the noise level of the integrand itself.
  /// Raise it when integrand values are only accurate to a known tolerance.
  double rel_floor = 1e-13;
};

namespace qdetail {

// QUADPACK 7-15 pair: positive Kronrod abscissae (descending) and weights;
// the Gauss nodes are the odd-indexed entries plus the midpoint.
inline constexpr double kKronrodX[7] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898};
inline constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

/// Neumaier compensated accumulator; additions happen in call order, which the
/// surrounding code keeps fixed.
struct Accum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double total() const { return sum + comp; }
};

struct Budget {
  std::size_t used = 0;
  std::size_t cap = std::size_t{1} << 20;
  int max_depth = 48;
  double rel_floor = 1e-13;

  bool spent() const { return used + 15 > cap; }
};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kKronrodW[7] * fc;
  double resg = kGaussW[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodX[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kKronrodW[j] * (f1 + f2);
    if (j % 2 == 1) resg += kGaussW[(j - 1) / 2] * (f1 + f2);
  }
  value = resk * h;
  err = std::fabs((resk - resg) * h);
}

/// Depth-first bisection with tolerance halving: leaves of the (full) binary
/// tree carry local tolerances summing to at most tol, so the accumulated
/// error estimate meets tol whenever every leaf is clean.
template <class F>
inline void adapt(const F& f, double a, double b, double tol, int depth,
                  Budget& bud, Accum& value, Accum& err, bool& trouble) {
  if (bud.spent()) {
    // Keep nodes_used <= budget strictly: fall back to a single midpoint
    // sample for this cell and report nonconvergence.
    trouble = true;
    if (bud.used < bud.cap) {
      bud.used += 1;
      const double v = f(0.5 * (a + b)) * (b - a);
      if (std::isfinite(v)) {
        value.add(v);
        err.add(std::fabs(v) + tol);
      } else {
        err.add(std::max(tol, 1.0));
      }
    } else {
      err.add(std::max(tol, 1.0));
    }
    return;
  }
  double v = 0.0, e = 0.0;
  gk15(f, a, b, v, e);
  bud.used += 15;
  const bool can_split = depth < bud.max_depth && !bud.spent();
  if (!std::isfinite(v)) {
    if (can_split) {
      const double m = 0.5 * (a + b);
      adapt(f, a, m, 0.5 * tol, depth + 1, bud, value, err, trouble);
      adapt(f, m, b, 0.5 * tol, depth + 1, bud, value, err, trouble);
    } else {
      trouble = true;
      err.add(std::max(tol, 1.0));
    }
    return;
  }
  // leaves whose estimate sits at the noise floor of their own magnitude
  // cannot improve by splitting (the 15-point sums carry ~1e-16 relative
  // roundoff, or worse when the integrand values themselves are toleranced);
  // accept them and let the error accumulator carry the floor
  const double floor_ = bud.rel_floor * std::fabs(v);
  if (e <= tol || e <= floor_ || !can_split) {
    value.add(v);
    err.add(e);
    if (e > tol && e > floor_) trouble = true;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, 0.5 * tol, depth + 1, bud, value, err, trouble);
  adapt(f, m, b, 0.5 * tol, depth + 1, bud, value, err, trouble);
}

/// Substitution power for an endpoint behaviour: x = u^gamma flattens
/// x^{-e} (gamma = 1/(1-e)) and gives log factors two extra smooth orders.
inline double sub_power(const EndpointSpec& s) {
  const double e = std::min(std::max(s.exponent, 0.0), 0.98);
  if (s.log_factor) return 3.0 / (1.0 - e);
  if (e > 0.0) return 1.0 / (1.0 - e);
  return 1.0;
}

/// Integrate f over (0, L] where f may be singular at 0 as described by s.
/// The integration variable stays the exact offset from the singular point;
/// callers arrange their coordinates so that 0 is the singular end.
template <class F>
inline void one_sided(const F& f, double L, const EndpointSpec& s, double tol,
                      Budget& bud, Accum& value, Accum& err, bool& trouble) {
  const double gamma = sub_power(s);
  if (gamma == 1.0) {
    adapt(f, 0.0, L, tol, 0, bud, value, err, trouble);
    return;
  }
  const double U = std::pow(L, 1.0 / gamma);
  auto g = [&f, gamma](double u) {
    return f(std::pow(u, gamma)) * gamma * std::pow(u, gamma - 1.0);
  };
  adapt(g, 0.0, U, tol, 0, bud, value, err, trouble);
}

/// Periodic trapezoid with doubling; nodes are visited in ascending index
/// order and re-used across doublings through the shared accumulator.
template <class G>
inline void trapezoid_circle(const G& g, double tol, Budget& bud, Accum& value,
                             Accum& err_out, bool& trouble) {
  std::size_t n = 16;
  Accum sum;
  for (std::size_t k = 0; k < n; ++k) sum.add(g(kTwoPi * double(k) / double(n)));
  bud.used += n;
  double prev = sum.total() / double(n);
  double diff = kInf;
  while (bud.used + n <= bud.cap) {
    const std::size_t n2 = 2 * n;
    for (std::size_t k = 0; k < n; ++k)
      sum.add(g(kTwoPi * double(2 * k + 1) / double(n2)));
    bud.used += n;
    n = n2;
    const double cur = sum.total() / double(n);
    diff = std::fabs(cur - prev);
    prev = cur;
    // same noise-floor acceptance as the adaptive leaves: doubling cannot
    // shrink the difference below the integrand's own accuracy
    if (n >= 64 && (diff <= tol || diff <= bud.rel_floor * std::fabs(cur))) {
      value.add(cur);
      err_out.add(diff);
      return;
    }
  }
  value.add(prev);
  err_out.add(std::isfinite(diff) ? diff : 1.0);
  trouble = true;
}

/// Wrap, sort, and merge marked angles; duplicates add their exponents (two
/// singular factors at the same angle compound).
inline std::vector<AngularSingularity> canonical_marks(
    std::vector<AngularSingularity> marks) {
  for (auto& m : marks) m.theta = wrap_angle(m.theta);
  std::sort(marks.begin(), marks.end(),
            [](const AngularSingularity& a, const AngularSingularity& b) {
              return a.theta < b.theta;
            });
  std::vector<AngularSingularity> merged;
  for (const auto& m : marks) {
    if (!merged.empty() && m.theta - merged.back().theta < 1e-12) {
      merged.back().exponent += m.exponent;
      merged.back().log_factor = merged.back().log_factor || m.log_factor;
    } else {
      merged.push_back(m);
    }
  }
  return merged;
}

/// lambda-normalized circle integral with isolated singular/break angles
/// (already canonicalized). Each arc between consecutive marked angles is
/// halved and integrated from its singular ends inward, in exact offset
/// coordinates; markers at angle 0 keep offsets exact on both sides of the
/// wrap.
template <class G>
inline void circle_core(const G& g,
                        const std::vector<AngularSingularity>& merged,
                        double tol, Budget& bud, Accum& value, Accum& err,
                        bool& trouble) {
  if (merged.empty()) {
    trapezoid_circle(g, tol, bud, value, err, trouble);
    return;
  }
  const std::size_t m = merged.size();
  const double tol_piece = tol * kTwoPi / double(2 * m);
  Accum raw, raw_err;
  for (std::size_t i = 0; i < m; ++i) {
    const double L = merged[i].theta;
    const bool wrap = (i + 1 == m);
    const double R = wrap ? merged[0].theta + kTwoPi : merged[i + 1].theta;
    if (R - L < 1e-13) continue;
    const double mid = 0.5 * (L + R);
    auto left = [&g, L](double x) { return g(L + x); };
    const EndpointSpec ls{merged[i].exponent, merged[i].log_factor};
    one_sided(left, mid - L, ls, tol_piece, bud, raw, raw_err, trouble);
    // Evaluate the right half as R - x; when R is the wrapped angle 0 the
    // offset is passed as a negative angle so trig arguments stay exact.
    const bool at_wrap_zero = wrap && merged[0].theta == 0.0;
    auto right = [&g, R, at_wrap_zero](double x) {
      return at_wrap_zero ? g(-x) : g(R - x);
    };
    const AngularSingularity& rm = wrap ? merged[0] : merged[i + 1];
    const EndpointSpec rs{rm.exponent, rm.log_factor};
    one_sided(right, R - mid, rs, tol_piece, bud, raw, raw_err, trouble);
  }
  value.add(raw.total() / kTwoPi);
  err.add(raw_err.total() / kTwoPi);
}

inline QuadratureResult finish(const Accum& value, const Accum& err,
                               const Budget& bud, double tol, bool trouble) {
  QuadratureResult res;
  res.value = value.total();
  res.error_estimate =
      std::max(err.total(), 4.0 * std::numeric_limits<double>::epsilon() *
                                std::fabs(res.value));
  res.nodes_used = bud.used;
  res.converged = !trouble && res.error_estimate <= tol;
  return res;
}

}  // namespace qdetail

/// Adaptive integral of f over [a, b] with declared endpoint behaviour.
/// Callers that integrate toward a strong singularity place it at coordinate 0
/// so the rule's offsets keep full precision.
template <class F>
QuadratureResult integrate_interval(const F& f, double a, double b,
                                    EndpointSpec left = {},
                                    EndpointSpec right = {},
                                    QuadratureOptions opt = {}) {
  if (!(a < b)) domain_fail("integrate_interval: need a < b");
  if (left.exponent >= 1.0 || right.exponent >= 1.0)
    domain_fail("integrate_interval: endpoint exponent >= 1 is not integrable");
  qdetail::Budget bud{0, opt.node_budget, opt.max_depth, opt.rel_floor};
  qdetail::Accum value, err;
  bool trouble = false;
  if (left.trivial() && right.trivial()) {
    qdetail::adapt(f, a, b, opt.tol, 0, bud, value, err, trouble);
  } else if (right.trivial()) {
    auto shifted = [&f, a](double x) { return f(a + x); };
    qdetail::one_sided(shifted, b - a, left, opt.tol, bud, value, err, trouble);
  } else if (left.trivial()) {
    auto flipped = [&f, b](double x) { return f(b - x); };
    qdetail::one_sided(flipped, b - a, right, opt.tol, bud, value, err,
                       trouble);
  } else {
    const double mid = 0.5 * (a + b);
    auto from_left = [&f, a](double x) { return f(a + x); };
    auto from_right = [&f, b](double x) { return f(b - x); };
    qdetail::one_sided(from_left, mid - a, left, 0.5 * opt.tol, bud, value, err,
                       trouble);
    qdetail::one_sided(from_right, b - mid, right, 0.5 * opt.tol, bud, value,
                       err, trouble);
  }
  return qdetail::finish(value, err, bud, opt.tol, trouble);
}

/// Convenience overload taking plain algebraic exponents.
template <class F>
QuadratureResult integrate_interval(const F& f, double a, double b,
                                    std::pair<double, double> exponents,
                                    double tol) {
  QuadratureOptions opt;
  opt.tol = tol;
  return integrate_interval(f, a, b, EndpointSpec{exponents.first, false},
                            EndpointSpec{exponents.second, false}, opt);
}

/// Integral of g against lambda = dtheta/2pi over the full circle. Angles in
/// `singular` mark algebraic/log singularities of g; an exponent >= 1 means
/// the integral diverges and is reported as a verdict, never attempted.
template <class G>
CircleResult integrate_circle(const G& g,
                              std::vector<AngularSingularity> singular = {},
                              QuadratureOptions opt = {}) {
  CircleResult res;
  const auto marks = qdetail::canonical_marks(std::move(singular));
  double worst = 0.0;
  for (const auto& s : marks) worst = std::max(worst, s.exponent);
  if (worst >= 1.0 - 1e-9) {
    res.verdict = Verdict::divergent;
    res.quad.value = kInf;
    res.quad.error_estimate = 0.0;
    res.quad.converged = true;
    return res;
  }
  qdetail::Budget bud{0, opt.node_budget, opt.max_depth, opt.rel_floor};
  qdetail::Accum value, err;
  bool trouble = false;
  qdetail::circle_core(g, marks, opt.tol, bud, value, err, trouble);
  res.quad = qdetail::finish(value, err, bud, opt.tol, trouble);
  return res;
}

struct DiskOptions {
  /// Behaviour of the angular mean as gap -> 0 (boundary-concentrated mass).
  EndpointSpec radial_edge = {};
  /// Gap values (1 - |a|) at which the radial integrand kinks (atom radii).
  std::vector<double> radial_breaks;
  /// Angular markers passed to every inner circle integral; exponents are
  /// capped below 1 there because interior circles never truly diverge.
  std::vector<AngularSingularity> angular;
  double tol = 1e-8;
  std::size_t node_budget = std::size_t{1} << 20;
  int max_depth = 48;
  /// Leaf acceptance floor relative to leaf magnitude; see QuadratureOptions.
  double rel_floor = 1e-13;
};

/// Area integral over the unit disk of f(DiskPoint), via the polar product
/// rule: outer adaptive integral in the boundary gap, inner circle rule.
/// The budget is shared between the two levels and counts integrand calls.
template <class F>
QuadratureResult integrate_disk_ex(const F& f, const DiskOptions& opt) {
  if (opt.radial_edge.exponent >= 1.0)
    domain_fail("integrate_disk: radial edge exponent >= 1 is not integrable");
  qdetail::Budget bud{0, opt.node_budget, opt.max_depth, opt.rel_floor};
  qdetail::Accum value, err;
  bool trouble = false;

  std::vector<AngularSingularity> inner_raw = opt.angular;
  for (auto& s : inner_raw) s.exponent = std::min(s.exponent, 0.9);
  auto inner = qdetail::canonical_marks(std::move(inner_raw));
  // cap again after coincident marks merged by summing: interior circles
  // never truly diverge, and a stronger substitution only buys deeper
  // probing of angles whose contribution is already negligible
  for (auto& s : inner) s.exponent = std::min(s.exponent, 0.9);
  const double tol_inner = opt.tol / 16.0;

  auto ring_mean = [&](double gap) {
    qdetail::Accum v, e;
    bool inner_trouble = false;
    auto g = [&f, gap](double theta) { return f(DiskPoint{gap, theta}); };
    qdetail::circle_core(g, inner, tol_inner, bud, v, e, inner_trouble);
    if (inner_trouble) trouble = true;
    return (1.0 - gap) * kTwoPi * v.total();
  };

  std::vector<double> cuts;
  for (double b : opt.radial_breaks)
    if (b > 1e-14 && b < 1.0 - 1e-14) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(1.0);

  const double tol_outer = 0.8 * opt.tol / double(cuts.size());
  double lo = 0.0;
  for (double hi : cuts) {
    if (lo == 0.0) {
      qdetail::one_sided(ring_mean, hi, opt.radial_edge, tol_outer, bud, value,
                         err, trouble);
    } else {
      qdetail::adapt(ring_mean, lo, hi, tol_outer, 0, bud, value, err, trouble);
    }
    lo = hi;
  }
  err.add(0.2 * opt.tol);  // allowance for the inner-tolerance floor
  return qdetail::finish(value, err, bud, opt.tol, trouble);
}

/// Spec-shaped convenience: plain complex-point integrand with an optional
/// (beta, s_max) radial grading hint.
template <class F>
QuadratureResult integrate_disk(
    const F& f, std::optional<std::pair<double, double>> radial_weight,
    double tol) {
  DiskOptions opt;
  opt.tol = tol;
  if (radial_weight) {
    opt.radial_edge = EndpointSpec{radial_weight->first, false};
    if (radial_weight->second < 1.0)
      opt.radial_breaks.push_back(1.0 - radial_weight->second);
    opt.angular.push_back({0.0, 0.0, false});
  }
  auto g = [&f](const DiskPoint& p) { return f(p.z()); };
  return integrate_disk_ex(g, opt);
}

}  // namespace pshlab
