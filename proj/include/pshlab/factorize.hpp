#pragma once

// Zero deflation and outer functions. Finite Blaschke products collect the
// zeros of a fixture into a unimodular-boundary factor; dividing it out
// leaves a zero-free function with the same weighted norm, which opens the
// interior norm route to every order p (via half powers below order 1). The
// outer function of a boundary density is the zero-free analytic function
// whose boundary modulus reproduces the density; multiplying by its p-th
// root maps the weighted space onto the classical one isometrically. A
// family of unit-mass single-atom weights probes membership of the unit
// ball through plain Poisson averages.

#include <pshlab/functions.hpp>
#include <pshlab/hardy.hpp>
#include <pshlab/kernels.hpp>
#include <pshlab/measures.hpp>
#include <pshlab/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pshlab {

/// Finite product of normalized factors (-conj(a)/|a|)(z - a)/(1 - conj(a) z)
/// times z^{origin_order}; modulus below 1 inside the disk, exactly 1 on the
/// circle. Zeros must satisfy 0 < |a| < 1 (origin zeros go through the order
/// argument).
inline AnalyticFunction blaschke_product(std::vector<Complex> zeros,
                                         int origin_order = 0) {
  return blaschke(std::move(zeros), origin_order);
}

/// Truncation of an infinite product described by a zero sequence. Factors
/// are appended until the geometric extrapolation of the gaps 1 - |a_j|
/// certifies the omitted sum below tail_tol; the product then differs from
/// the full one by at most (1 + rho)/(1 - rho) * tail_bound on |z| <= rho. A
/// sequence whose gap sum never shows a summable tail fails the convergence
/// condition sum(1 - |a_j|) < inf and is rejected.
struct TruncatedBlaschke {
  AnalyticFunction product;
  std::size_t factor_count = 0;
  double tail_bound = 0.0;
};

template <class Gen>  // Gen: index -> zero
TruncatedBlaschke blaschke_from_sequence(Gen&& zero_at, double tail_tol,
                                         std::size_t max_factors = 4096) {
  if (!(tail_tol > 0.0))
    domain_fail("blaschke_from_sequence: need a positive tail tolerance");
  std::vector<Complex> zs;
  std::vector<double> gaps;
  double partial = 0.0;
  for (std::size_t j = 0; j < max_factors; ++j) {
    const Complex a = zero_at(j);
    const double aa = std::abs(a);
    if (!(aa > 0.0) || aa >= 1.0)
      domain_fail("blaschke_from_sequence: zeros must satisfy 0 < |a| < 1");
    zs.push_back(a);
    gaps.push_back(1.0 - aa);
    partial += gaps.back();
    if (j >= 8) {
      double ratio = 0.0;
      for (std::size_t k = j - 7; k <= j; ++k)
        ratio = std::max(ratio, gaps[k] / gaps[k - 1]);
      if (ratio < 0.999) {
        const double tail = gaps.back() * ratio / (1.0 - ratio);
        if (tail <= tail_tol) {
          const std::size_t count = zs.size();
          return {blaschke(std::move(zs), 0), count, tail};
        }
      }
    }
  }
  domain_fail("blaschke_from_sequence: gap sum " + std::to_string(partial) +
              " shows no summable tail after " + std::to_string(max_factors) +
              " factors; the zero sequence fails the convergence condition "
              "sum(1 - |a_j|) < inf");
}

namespace odetail {

/// Quotient of an ascending coefficient vector by (z - r); the remainder is
/// the value at r and must vanish when r is a recorded root.
inline std::vector<Complex> divide_root(const std::vector<Complex>& c,
                                        Complex r) {
  double scale = 0.0;
  for (const auto& v : c) scale += std::abs(v);
  std::vector<Complex> q(c.size() - 1);
  Complex carry = c.back();
  for (std::size_t k = c.size() - 1; k > 0; --k) {
    q[k - 1] = carry;
    carry = c[k - 1] + r * carry;
  }
  if (std::abs(carry) > 1e-9 * scale)
    domain_fail("deflate: a recorded zero is not a root of the polynomial "
                "part");
  return q;
}

/// Exchange the plain factor (z - r) for its unimodular-boundary version:
/// divide by (z - r), multiply by (-r/|r|)(1 - conj(r) z). The degree is
/// preserved and the in-disk zero moves to its reflection across the circle.
inline std::vector<Complex> exchange_root(const std::vector<Complex>& c,
                                          Complex r) {
  const std::vector<Complex> q = divide_root(c, r);
  const Complex s = -r / std::abs(r);
  const Complex rc = std::conj(r);
  std::vector<Complex> out(q.size() + 1);
  out[0] = s * q[0];
  for (std::size_t k = 1; k < q.size(); ++k)
    out[k] = s * (q[k] - rc * q[k - 1]);
  out[q.size()] = s * (-rc) * q.back();
  return out;
}

/// Zeros split off a node, with the zero-free cofactor.
struct SplitZeros {
  std::vector<Complex> zeros;
  int origin = 0;
  fdetail::NodePtr g;
};

inline SplitZeros deflate_poly(const fdetail::PolyNode& pn) {
  if (!pn.known_zeros)
    domain_fail("deflate: unsupported fixture (polynomial zeros not "
                "recorded; build it from affine factors)");
  SplitZeros out;
  for (const auto& r : *pn.known_zeros) {
    if (r == Complex(0.0))
      ++out.origin;
    else
      out.zeros.push_back(r);
  }
  std::vector<Complex> c = pn.c;
  double scale = 0.0;
  for (const auto& v : c) scale += std::abs(v);
  for (int k = 0; k < out.origin; ++k) {
    if (c.size() <= 1 || std::abs(c.front()) > 1e-12 * scale)
      domain_fail("deflate: a recorded origin zero is absent from the "
                  "coefficients");
    c.erase(c.begin());
  }
  for (const auto& r : out.zeros) c = exchange_root(c, r);
  auto g = std::make_shared<fdetail::PolyNode>();
  g->c = std::move(c);
  g->known_zeros = std::vector<Complex>{};
  out.g = std::move(g);
  return out;
}

inline SplitZeros deflate_node(const fdetail::NodePtr& n) {
  if (const auto* pn = dynamic_cast<const fdetail::PolyNode*>(n.get()))
    return deflate_poly(*pn);
  if (const auto* bn = dynamic_cast<const fdetail::BlaschkeNode*>(n.get())) {
    // the fixture is already a pure zero factor
    return {bn->zs, bn->origin_order, constant(1.0).share()};
  }
  if (const auto* pr = dynamic_cast<const fdetail::ProductNode*>(n.get())) {
    SplitZeros a = deflate_node(pr->f);
    SplitZeros b = deflate_node(pr->g);
    a.zeros.insert(a.zeros.end(), b.zeros.begin(), b.zeros.end());
    a.origin += b.origin;
    auto prod = std::make_shared<fdetail::ProductNode>();
    prod->f = std::move(a.g);
    prod->g = std::move(b.g);
    a.g = std::move(prod);
    return a;
  }
  const auto zs = n->zeros();
  if (zs && zs->empty()) return {{}, 0, n};
  domain_fail("deflate: unsupported fixture (no structural zero division "
              "for this node)");
}

}  // namespace odetail

/// Norms on both sides of the deflation: the original function by the
/// boundary route against the zero-free factor by the interior route (half
/// powers below order 1, where the interior route needs a zero-free base).
struct DeflationReport {
  NormValue f_norm;
  NormValue g_norm;
  double gap = 0.0;  // |f_norm - g_norm| / max(1, f_norm) when both finite
};

struct Deflation {
  AnalyticFunction blaschke;
  AnalyticFunction zero_free;
  DeflationReport report;
};

namespace odetail {

inline NormValue independent_norm(const AnalyticFunction& g, double p,
                                  const RieszMeasure& nu,
                                  QuadratureOptions opt) {
  if (p >= 1.0) return weighted_norm_interior(g, p, nu, opt);
  // half-power route: the square of the order-2 norm of g^{p/2} is the p-th
  // power of the order-p norm of g
  NormValue half = weighted_norm_interior(power(g, 0.5 * p), 2.0, nu, opt);
  if (half.verdict == Verdict::divergent) return half;
  NormValue out = half;
  out.quad.value = std::pow(half.quad.value, 2.0 / p);
  out.quad.error_estimate =
      half.quad.error_estimate * (2.0 / p) *
      std::pow(std::max(half.quad.value, 1e-300), 2.0 / p - 1.0);
  return out;
}

}  // namespace odetail

/// Split f into its zero factor and a zero-free cofactor with the same
/// weighted norm. Requires the zero list of f to be structurally known;
/// the cofactor is certified zero-free on a 64 x 64 polar grid.
inline Deflation deflate(const AnalyticFunction& f, double p,
                         const RieszMeasure& nu, QuadratureOptions opt = {}) {
  if (!(p > 0.0)) domain_fail("deflate: need p > 0");
  if (!f.zeros())
    domain_fail("deflate: unsupported fixture (zero structure not recorded; "
                "build fixtures from factors with known zeros)");
  odetail::SplitZeros sz = odetail::deflate_node(f.share());
  AnalyticFunction beta = blaschke(sz.zeros, sz.origin);
  AnalyticFunction g(sz.g);
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const double r = (double(i) + 0.5) / 64.0;
      const double th = kTwoPi * double(j) / 64.0;
      if (!(std::abs(g(r * unit_circle(th))) > 0.0))
        domain_fail("deflate: the zero-free factor vanishes on the "
                    "certificate grid");
    }
  }
  DeflationReport rep{weighted_norm_boundary(f, p, nu, opt),
                      odetail::independent_norm(g, p, nu, opt), 0.0};
  const bool fd = rep.f_norm.verdict == Verdict::divergent;
  const bool gd = rep.g_norm.verdict == Verdict::divergent;
  if (!fd && !gd)
    rep.gap = std::fabs(rep.f_norm.quad.value - rep.g_norm.quad.value) /
              std::max(1.0, rep.f_norm.quad.value);
  else
    rep.gap = (fd && gd) ? 0.0 : kInf;
  return Deflation{std::move(beta), std::move(g), std::move(rep)};
}

/// Zero-free analytic function with prescribed boundary modulus, evaluated
/// as exp of the circle integral of herglotz(z, theta) log alpha(theta).
/// Its value at 0 is the geometric mean of the density and its modulus stays
/// above the density's lower bound everywhere in the disk.
struct OuterFunction {
  BoundaryDensity density;
  double lower_bound = 0.0;
  std::vector<AngularSingularity> log_marks;
  QuadratureOptions inner;
};

inline OuterFunction outer_function(const RieszMeasure& nu,
                                    QuadratureOptions opt = {}) {
  OuterFunction A{boundary_density_of(nu), 0.0, {}, opt};
  A.lower_bound = density_lower_bound(nu, 4096);
  if (!(A.lower_bound > 0.0))
    domain_fail("outer_function: the boundary density must have a positive "
                "lower bound");
  // where the density blows up, its log has an integrable log spike
  for (const auto& m : A.density.singular_angles)
    A.log_marks.push_back({m.theta, 0.0, true});
  // run the kernel integrals two decades below the requested tolerance so
  // quadratures OVER the outer function see clean values; the floor covers
  // the density's own evaluation noise
  A.inner.tol = std::max(opt.tol * 1e-2, 1e-13);
  A.inner.rel_floor = std::max(opt.rel_floor, 1e-11);
  return A;
}

namespace odetail {

/// Circle integral of kernel(theta) log alpha(theta) for both kernel parts,
/// with a split mark at the kernel's peak angle; retries once with a larger
/// budget before reporting failure.
template <class Kernel>
Complex kernel_log_integral(const OuterFunction& A, double peak_theta,
                            const Kernel& kernel) {
  auto run = [&](const QuadratureOptions& o, bool& ok) {
    std::vector<AngularSingularity> marks = A.log_marks;
    marks.push_back({peak_theta, 0.0, false});
    auto re = [&](double th) {
      return kernel(th).real() * std::log(A.density(th));
    };
    auto im = [&](double th) {
      return kernel(th).imag() * std::log(A.density(th));
    };
    const CircleResult cr = integrate_circle(re, marks, o);
    const CircleResult ci = integrate_circle(im, marks, o);
    ok = cr.quad.converged && ci.quad.converged;
    return Complex(cr.quad.value, ci.quad.value);
  };
  bool ok = false;
  const Complex first = run(A.inner, ok);
  if (ok) return first;
  QuadratureOptions boosted = A.inner;
  boosted.node_budget *= 8;
  boosted.max_depth += 8;
  const Complex second = run(boosted, ok);
  if (ok) return second;
  throw std::runtime_error(
      "outer evaluation: the kernel integral did not settle near the "
      "density's singular angles");
}

inline Complex herglotz_log(const OuterFunction& A, Complex z,
                            double peak_theta) {
  return kernel_log_integral(A, peak_theta, [&](double th) {
    // real part via the stable Poisson form
    return Complex(poisson(z, th), herglotz(z, th).imag());
  });
}

inline Complex herglotz_log_dz(const OuterFunction& A, Complex z,
                               double peak_theta) {
  return kernel_log_integral(
      A, peak_theta, [&](double th) { return herglotz_dz(z, th); });
}

/// A^q as a function node; the exponential keeps it single-valued for any
/// real q, with boundary growth exponents of the density scaled by q.
struct OuterPowNode final : fdetail::FnNode {
  OuterFunction A;
  double q = 1.0;

  OuterPowNode(OuterFunction a, double qq) : A(std::move(a)), q(qq) {}

  Complex eval(Complex z) const override {
    return std::exp(q * herglotz_log(A, z, std::arg(z)));
  }
  Complex eval(const DiskPoint& p) const override {
    return std::exp(q * herglotz_log(A, p.z(), p.theta));
  }
  Complex deriv(Complex z) const override {
    return q * herglotz_log_dz(A, z, std::arg(z)) * eval(z);
  }
  Complex deriv(const DiskPoint& p) const override {
    return q * herglotz_log_dz(A, p.z(), p.theta) * eval(p);
  }
  bool nonvanishing() const override { return true; }
  std::optional<std::vector<Complex>> zeros() const override {
    return std::vector<Complex>{};
  }
  std::vector<AngularSingularity> singular() const override {
    std::vector<AngularSingularity> out;
    for (const auto& m : A.density.singular_angles)
      out.push_back({m.theta, q * m.exponent, m.log_factor});
    return out;
  }
};

}  // namespace odetail

inline Complex outer_eval(const OuterFunction& A, Complex z) {
  if (!in_open_disk(z))
    domain_fail("outer_eval: point must lie in the open disk");
  return std::exp(odetail::herglotz_log(A, z, std::arg(z)));
}

inline Complex outer_eval(const OuterFunction& A, const DiskPoint& p) {
  if (!(p.gap > 0.0))
    domain_fail("outer_eval: point must lie in the open disk");
  return std::exp(odetail::herglotz_log(A, p.z(), p.theta));
}

/// The outer function raised to a real power, as a composable fixture.
inline AnalyticFunction outer_power(const OuterFunction& A, double q) {
  return AnalyticFunction(std::make_shared<odetail::OuterPowNode>(A, q));
}

/// Multiply by the p-th root of the outer function of nu: an isometry from
/// the weighted space onto the classical one. Rejects non-members with the
/// membership diagnostic.
inline AnalyticFunction isometry_apply(const AnalyticFunction& f, double p,
                                       const RieszMeasure& nu,
                                       QuadratureOptions opt = {}) {
  if (!(p > 0.0)) domain_fail("isometry_apply: need p > 0");
  const MembershipReport rep = membership(f, p, nu, opt);
  if (rep.verdict != Membership::member)
    domain_fail("isometry_apply: input outside the weighted space (" +
                rep.note + "; combined boundary exponent " +
                std::to_string(rep.weighted_exponent) + ")");
  return outer_power(outer_function(nu, opt), 1.0 / p) * f;
}

/// Inverse direction: divide by the p-th root, mapping the classical space
/// back into the weighted one (the outer modulus is bounded below, so the
/// division is harmless).
inline AnalyticFunction isometry_invert(const AnalyticFunction& f, double p,
                                        const RieszMeasure& nu,
                                        QuadratureOptions opt = {}) {
  if (!(p > 0.0)) domain_fail("isometry_invert: need p > 0");
  const double ce = hdetail::worst_exponent(hdetail::power_marks(f, p));
  if (ce >= 1.0 - 1e-9)
    domain_fail("isometry_invert: input outside the classical space "
                "(combined trace exponent " +
                std::to_string(ce) + ")");
  return outer_power(outer_function(nu, opt), -1.0 / p) * f;
}

/// Both sides of the norm identity, plus the round-trip error of the map
/// followed by its inverse on an interior grid.
struct IsometryReport {
  NormValue weighted;   // norm of f in the weighted space, boundary route
  NormValue classical;  // norm of A^{1/p} f in the classical space
  double gap = 0.0;     // |difference| / max(1, weighted)
  double roundtrip = 0.0;
};

inline IsometryReport isometry_check(const AnalyticFunction& f, double p,
                                     const RieszMeasure& nu,
                                     QuadratureOptions opt = {}) {
  AnalyticFunction mapped = isometry_apply(f, p, nu, opt);
  NormValue w = weighted_norm_boundary(f, p, nu, opt);
  QuadratureOptions copt = opt;
  // values of the mapped function carry the kernel-integral tolerance
  copt.rel_floor = std::max(opt.rel_floor, 3e-9);
  NormValue c = classical_norm(mapped, p, copt);
  IsometryReport rep{std::move(w), std::move(c), 0.0, 0.0};
  const bool wd = rep.weighted.verdict == Verdict::divergent;
  const bool cd = rep.classical.verdict == Verdict::divergent;
  if (!wd && !cd)
    rep.gap = std::fabs(rep.weighted.quad.value - rep.classical.quad.value) /
              std::max(1.0, rep.weighted.quad.value);
  else
    rep.gap = (wd && cd) ? 0.0 : kInf;
  AnalyticFunction back = isometry_invert(mapped, p, nu, opt);
  for (double r : {0.25, 0.55, 0.85}) {
    for (int j = 0; j < 12; ++j) {
      const Complex z = r * unit_circle(kTwoPi * (double(j) + 0.5) / 12.0);
      rep.roundtrip = std::max(rep.roundtrip, std::abs(back(z) - f(z)));
    }
  }
  return rep;
}

/// One row per probe radius: the p-th power norm of f under the unit-mass
/// atom weight at t e^{i witness_angle}, which is the plain Poisson average
/// of |f*|^p at that point.
struct ProbeRow {
  double t = 0.0;
  Verdict verdict = Verdict::finite;
  double value = 0.0;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  double max_value = 0.0;
  std::optional<double> witness;  // first t whose row exceeds 1
  bool all_within_unit = true;    // every row <= 1 + 1e-10
};

inline ProbeReport ball_probe(const AnalyticFunction& f, double p,
                              const std::vector<double>& t_grid,
                              double witness_angle = 0.0,
                              QuadratureOptions opt = {}) {
  if (!(p > 0.0)) domain_fail("ball_probe: need p > 0");
  ProbeReport rep;
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 1.0))
      domain_fail("ball_probe: probe radii must lie in (0, 1)");
    const RieszMeasure nu =
        RieszMeasure::atom(t * unit_circle(witness_angle), 1.0);
    const NormValue nv = weighted_norm_boundary(f, p, nu, opt);
    const ProbeRow row{t, nv.verdict, nv.power_integral};
    rep.max_value = std::max(rep.max_value, row.value);
    if (!rep.witness && row.value > 1.0) rep.witness = t;
    if (!(row.value <= 1.0 + 1e-10)) rep.all_within_unit = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace pshlab
