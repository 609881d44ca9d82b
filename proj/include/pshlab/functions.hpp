#pragma once

// A small fleet of analytic test functions, composable as an expression
// tree: polynomials, the branch power (1-z)^{-a}, Blaschke products, sums,
// products, and real powers of zero-free functions. Every node carries an
// exact derivative, structural zero information, and boundary singularity
// metadata (growth exponents of |f| at marked angles). Boundary-sensitive
// nodes evaluate through DiskPoint offsets so traces stay accurate at tiny
// gaps and angles.

#include <pshlab/kernels.hpp>
#include <pshlab/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace pshlab {

namespace fdetail {

struct FnNode {
  virtual ~FnNode() = default;
  virtual Complex eval(Complex z) const = 0;
  virtual Complex deriv(Complex z) const = 0;
  virtual Complex eval(const DiskPoint& p) const { return eval(p.z()); }
  virtual Complex deriv(const DiskPoint& p) const { return deriv(p.z()); }
  virtual bool nonvanishing() const = 0;
  /// Interior zeros listed with multiplicity; nullopt when not structurally
  /// known (e.g. general polynomials).
  virtual std::optional<std::vector<Complex>> zeros() const {
    return std::nullopt;
  }
  virtual std::vector<AngularSingularity> singular() const { return {}; }
};

using NodePtr = std::shared_ptr<const FnNode>;

/// Merge singularity lists for a sum: |f + g| grows like the worse term, so
/// same-angle entries keep the larger exponent (unlike products, where
/// exponents add, handled downstream).
inline std::vector<AngularSingularity> merge_max(
    std::vector<AngularSingularity> a,
    const std::vector<AngularSingularity>& b) {
  for (const auto& m : b) {
    bool found = false;
    for (auto& e : a) {
      if (std::fabs(e.theta - m.theta) < 1e-12) {
        e.exponent = std::max(e.exponent, m.exponent);
        e.log_factor = e.log_factor || m.log_factor;
        found = true;
      }
    }
    if (!found) a.push_back(m);
  }
  return a;
}

}  // namespace fdetail

class AnalyticFunction {
 public:
  explicit AnalyticFunction(fdetail::NodePtr node) : node_(std::move(node)) {}

  Complex operator()(Complex z) const { return node_->eval(z); }
  Complex operator()(const DiskPoint& p) const { return node_->eval(p); }
  Complex derivative(Complex z) const { return node_->deriv(z); }
  Complex derivative(const DiskPoint& p) const { return node_->deriv(p); }

  bool nonvanishing() const { return node_->nonvanishing(); }
  std::optional<std::vector<Complex>> zeros() const { return node_->zeros(); }
  std::vector<AngularSingularity> boundary_singularities() const {
    return node_->singular();
  }

  /// Boundary trace at angle theta (gap-zero evaluation, exact offsets).
  Complex trace(double theta) const {
    return node_->eval(DiskPoint{0.0, theta});
  }

  const fdetail::FnNode& node() const { return *node_; }
  fdetail::NodePtr share() const { return node_; }

 private:
  fdetail::NodePtr node_;
};

namespace fdetail {

struct PolyNode final : FnNode {
  std::vector<Complex> c;  // c[0] + c[1] z + ...
  std::optional<std::vector<Complex>> known_zeros;

  Complex eval(Complex z) const override {
    Complex acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
  }
  Complex deriv(Complex z) const override {
    Complex acc = 0.0;
    for (std::size_t i = c.size(); i-- > 1;)
      acc = acc * z + double(i) * c[i];
    return acc;
  }
  bool nonvanishing() const override {
    if (!known_zeros) return false;
    return known_zeros->empty() && !(c.size() == 1 && c[0] == Complex(0.0));
  }
  std::optional<std::vector<Complex>> zeros() const override {
    return known_zeros;
  }
};

struct BranchPowNode final : FnNode {
  double a;  // (1 - z)^{-a}

  static Complex from_w(Complex w, double a) {
    const double m = std::hypot(w.real(), w.imag());
    if (m == 0.0) {
      if (a > 0.0) return Complex(kInf, 0.0);
      if (a < 0.0) return Complex(0.0, 0.0);
      return Complex(1.0, 0.0);
    }
    const double lm = std::log(m);
    const double ar = std::atan2(w.imag(), w.real());
    return std::exp(-a * lm) * unit_circle(-a * ar);
  }
  Complex eval(Complex z) const override { return from_w(1.0 - z, a); }
  Complex eval(const DiskPoint& p) const override {
    return from_w(p.one_minus_z(), a);
  }
  Complex deriv(Complex z) const override {
    return a * from_w(1.0 - z, a + 1.0);
  }
  Complex deriv(const DiskPoint& p) const override {
    return a * from_w(p.one_minus_z(), a + 1.0);
  }
  bool nonvanishing() const override { return true; }
  std::optional<std::vector<Complex>> zeros() const override {
    return std::vector<Complex>{};
  }
  std::vector<AngularSingularity> singular() const override {
    if (a > 0.0) return {{0.0, a, false}};
    return {};
  }
};

struct BlaschkeNode final : FnNode {
  std::vector<Complex> zs;  // nonzero zeros
  int origin_order = 0;

  Complex eval(Complex z) const override {
    Complex acc = 1.0;
    for (int k = 0; k < origin_order; ++k) acc *= z;
    for (const auto& a : zs) acc *= blaschke_factor(z, a);
    return acc;
  }
  Complex deriv(Complex z) const override {
    // full product rule: sum over factors of (derivative of one) x (rest)
    Complex total = 0.0;
    if (origin_order > 0) {
      Complex rest = 1.0;
      for (const auto& a : zs) rest *= blaschke_factor(z, a);
      Complex zm1 = 1.0;
      for (int k = 0; k < origin_order - 1; ++k) zm1 *= z;
      total += double(origin_order) * zm1 * rest;
    }
    for (std::size_t i = 0; i < zs.size(); ++i) {
      Complex rest = 1.0;
      for (int k = 0; k < origin_order; ++k) rest *= z;
      for (std::size_t j = 0; j < zs.size(); ++j)
        if (j != i) rest *= blaschke_factor(z, zs[j]);
      total += blaschke_factor_dz(z, zs[i]) * rest;
    }
    return total;
  }
  bool nonvanishing() const override {
    return zs.empty() && origin_order == 0;
  }
  std::optional<std::vector<Complex>> zeros() const override {
    std::vector<Complex> all;
    for (int k = 0; k < origin_order; ++k) all.push_back(Complex(0.0));
    all.insert(all.end(), zs.begin(), zs.end());
    return all;
  }
};

struct SumNode final : FnNode {
  NodePtr f, g;
  Complex eval(Complex z) const override { return f->eval(z) + g->eval(z); }
  Complex deriv(Complex z) const override {
    return f->deriv(z) + g->deriv(z);
  }
  Complex eval(const DiskPoint& p) const override {
    return f->eval(p) + g->eval(p);
  }
  Complex deriv(const DiskPoint& p) const override {
    return f->deriv(p) + g->deriv(p);
  }
  bool nonvanishing() const override { return false; }
  std::vector<AngularSingularity> singular() const override {
    return merge_max(f->singular(), g->singular());
  }
};

struct ProductNode final : FnNode {
  NodePtr f, g;
  Complex eval(Complex z) const override { return f->eval(z) * g->eval(z); }
  Complex deriv(Complex z) const override {
    return f->deriv(z) * g->eval(z) + f->eval(z) * g->deriv(z);
  }
  Complex eval(const DiskPoint& p) const override {
    return f->eval(p) * g->eval(p);
  }
  Complex deriv(const DiskPoint& p) const override {
    return f->deriv(p) * g->eval(p) + f->eval(p) * g->deriv(p);
  }
  bool nonvanishing() const override {
    return f->nonvanishing() && g->nonvanishing();
  }
  std::optional<std::vector<Complex>> zeros() const override {
    auto zf = f->zeros();
    auto zg = g->zeros();
    if (!zf || !zg) return std::nullopt;
    auto all = *zf;
    all.insert(all.end(), zg->begin(), zg->end());
    return all;
  }
  std::vector<AngularSingularity> singular() const override {
    auto a = f->singular();
    const auto b = g->singular();
    a.insert(a.end(), b.begin(), b.end());  // product: exponents compound
    return a;
  }
};

struct PowerNode final : FnNode {
  NodePtr base;
  double q;

  static Complex cpow(Complex w, double q) {
    const double m = std::abs(w);
    const double ar = std::arg(w);
    return std::exp(q * std::log(m)) * unit_circle(q * ar);
  }
  Complex eval(Complex z) const override { return cpow(base->eval(z), q); }
  Complex eval(const DiskPoint& p) const override {
    return cpow(base->eval(p), q);
  }
  Complex deriv(Complex z) const override {
    return q * cpow(base->eval(z), q - 1.0) * base->deriv(z);
  }
  Complex deriv(const DiskPoint& p) const override {
    return q * cpow(base->eval(p), q - 1.0) * base->deriv(p);
  }
  bool nonvanishing() const override { return true; }
  std::optional<std::vector<Complex>> zeros() const override {
    return std::vector<Complex>{};
  }
  std::vector<AngularSingularity> singular() const override {
    auto marks = base->singular();
    for (auto& m : marks) m.exponent *= q;
    return marks;
  }
};

}  // namespace fdetail

inline AnalyticFunction constant(Complex c) {
  if (c == Complex(0.0))
    domain_fail("constant: the zero function is not a usable fixture");
  auto n = std::make_shared<fdetail::PolyNode>();
  n->c = {c};
  n->known_zeros = std::vector<Complex>{};
  return AnalyticFunction(n);
}

inline AnalyticFunction identity() {
  auto n = std::make_shared<fdetail::PolyNode>();
  n->c = {Complex(0.0), Complex(1.0)};
  n->known_zeros = std::vector<Complex>{Complex(0.0)};
  return AnalyticFunction(n);
}

/// c0 + c1 z with the zero recorded when it lies in the open disk.
inline AnalyticFunction affine(Complex c0, Complex c1) {
  if (c1 == Complex(0.0)) return constant(c0);
  auto n = std::make_shared<fdetail::PolyNode>();
  n->c = {c0, c1};
  const Complex root = -c0 / c1;
  if (in_open_disk(root))
    n->known_zeros = std::vector<Complex>{root};
  else
    n->known_zeros = std::vector<Complex>{};
  return AnalyticFunction(n);
}

/// General polynomial; zero locations are not derived.
inline AnalyticFunction polynomial(std::vector<Complex> coeffs) {
  if (coeffs.empty()) domain_fail("polynomial: need at least one coefficient");
  while (coeffs.size() > 1 && coeffs.back() == Complex(0.0)) coeffs.pop_back();
  if (coeffs.size() == 1) return constant(coeffs[0]);
  if (coeffs.size() == 2) return affine(coeffs[0], coeffs[1]);
  auto n = std::make_shared<fdetail::PolyNode>();
  n->c = std::move(coeffs);
  return AnalyticFunction(n);
}

/// (1 - z)^{-a}; for a > 0 the trace blows up at angle 0 like |theta|^{-a}.
inline AnalyticFunction branch_power(double a) {
  auto n = std::make_shared<fdetail::BranchPowNode>();
  n->a = a;
  return AnalyticFunction(n);
}

inline AnalyticFunction blaschke(std::vector<Complex> zeros,
                                 int origin_order = 0) {
  if (origin_order < 0) domain_fail("blaschke: negative origin order");
  for (const auto& a : zeros) {
    if (!in_open_disk(a) || a == Complex(0.0))
      domain_fail("blaschke: zeros must be nonzero points of the open disk "
                  "(origin zeros go through origin_order)");
  }
  auto n = std::make_shared<fdetail::BlaschkeNode>();
  n->zs = std::move(zeros);
  n->origin_order = origin_order;
  return AnalyticFunction(n);
}

inline AnalyticFunction operator+(const AnalyticFunction& f,
                                  const AnalyticFunction& g) {
  auto n = std::make_shared<fdetail::SumNode>();
  n->f = f.share();
  n->g = g.share();
  return AnalyticFunction(n);
}

inline AnalyticFunction operator*(const AnalyticFunction& f,
                                  const AnalyticFunction& g) {
  auto n = std::make_shared<fdetail::ProductNode>();
  n->f = f.share();
  n->g = g.share();
  return AnalyticFunction(n);
}

inline AnalyticFunction operator*(Complex c, const AnalyticFunction& f) {
  return constant(c) * f;
}

/// f^q for real q, principal branch; requires a structurally zero-free base.
inline AnalyticFunction power(const AnalyticFunction& f, double q) {
  if (!f.nonvanishing())
    domain_fail("power: fractional powers need a zero-free base");
  auto n = std::make_shared<fdetail::PowerNode>();
  n->base = f.share();
  n->q = q;
  return AnalyticFunction(n);
}

/// Real part of an analytic function, as the model of a harmonic function;
/// carries the gradient (h_x, h_y) = conj(g') exactly.
struct HarmonicFunction {
  AnalyticFunction analytic;

  double operator()(Complex z) const { return analytic(z).real(); }
  double operator()(const DiskPoint& p) const { return analytic(p).real(); }
  Complex grad(Complex z) const { return std::conj(analytic.derivative(z)); }
  Complex grad(const DiskPoint& p) const {
    return std::conj(analytic.derivative(p));
  }
};

inline HarmonicFunction harmonic_re(AnalyticFunction g) {
  return HarmonicFunction{std::move(g)};
}

/// Area-density Laplacian (classical Laplacian / 2 pi) of |f|^p for analytic
/// f: (p^2 / 2 pi) |f|^{p-2} |f'|^2. At a zero of f this is 0 for p > 2,
/// finite for p = 2, and +inf (integrable) for p < 2.
template <class Point>
double laplacian_abs_p(const AnalyticFunction& f, double p, const Point& z) {
  if (!(p > 0.0)) domain_fail("laplacian_abs_p: need p > 0");
  const double scale = p * p / kTwoPi;
  const Complex fz = f(z);
  const Complex dfz = f.derivative(z);
  const double m = std::abs(fz);
  if (m == 0.0) {
    if (p > 2.0) return 0.0;
    if (p == 2.0) return scale * std::norm(dfz);
    return std::norm(dfz) == 0.0 ? 0.0 : kInf;
  }
  return scale * std::pow(m, p - 2.0) * std::norm(dfz);
}

/// Same density for |h|^p with h harmonic: (p(p-1)/2 pi)|h|^{p-2}|grad h|^2
/// (valid for p > 1; p = 1 has a distributional part at zero crossings).
template <class Point>
double laplacian_abs_p(const HarmonicFunction& h, double p, const Point& z) {
  if (!(p > 1.0)) domain_fail("laplacian_abs_p: harmonic case needs p > 1");
  const double scale = p * (p - 1.0) / kTwoPi;
  const double hv = h(z);
  const double g2 = std::norm(h.grad(z));
  const double m = std::fabs(hv);
  if (m == 0.0) {
    if (p > 2.0) return 0.0;
    if (p == 2.0) return scale * g2;
    return g2 == 0.0 ? 0.0 : kInf;
  }
  return scale * std::pow(m, p - 2.0) * g2;
}

/// Density of the mixed term: for harmonic a and b, the product a b has
/// area-density Laplacian (1/pi) grad a . grad b.
template <class Point>
double laplacian_product(const HarmonicFunction& a, const HarmonicFunction& b,
                         const Point& z) {
  const Complex ga = a.grad(z);
  const Complex gb = b.grad(z);
  return (ga.real() * gb.real() + ga.imag() * gb.imag()) / kPi;
}

/// Taylor coefficients of (1 - z)^{-a}: c_0 = 1, c_{n+1} = c_n (n + a)/(n+1).
inline std::vector<double> taylor_one_minus_pow(double a, std::size_t count) {
  std::vector<double> c(count);
  if (count == 0) return c;
  c[0] = 1.0;
  for (std::size_t n = 0; n + 1 < count; ++n)
    c[n + 1] = c[n] * (double(n) + a) / double(n + 1);
  return c;
}

}  // namespace pshlab
