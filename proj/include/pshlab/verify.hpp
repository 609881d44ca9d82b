/// The verification suite: quantitative checks of the library's structural
/// identities — route agreement between independent norm computations,
/// level-set monotone limits, boundary-density asymptotics, weak-* decay,
/// zero deflation, and the outer-function isometry. Each check carries a
/// pinned tolerance and the reference tag of the statement it exercises;
/// the same battery backs both the acceptance tests and `pshlab verify`.
#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/factorize.hpp"
#include "pshlab/parse.hpp"

namespace pshlab {

struct CheckResult {
  int id = 0;
  std::string tag;
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace vdetail {

struct CheckInfo {
  const char* tag;
  const char* name;
};

inline const CheckInfo& check_info(int id) {
  static const CheckInfo table[] = {
      {"Sec 2", "classical-anchor"},
      {"Thm 6.4", "norm-route-agreement"},
      {"Thm 2.1", "level-set-monotone-limit"},
      {"Thm 3.2", "counterexample-membership"},
      {"Lem 3.1", "potential-contact-rate"},
      {"Prop 4.2", "boundary-density-profile"},
      {"Thm 5.1", "weak-star-convergence"},
      {"Thm 6.1", "deflation-invariance"},
      {"Thm 7.3", "isometry-transport"},
      {"Thm 7.2", "unit-ball-probe"},
      {"Thm 7.1", "norm-semicontinuity"},
  };
  if (id < 1 || id > 11) domain_fail("check id out of range");
  return table[id - 1];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline double fit_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(xs.size());
  my /= double(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

inline std::vector<std::pair<std::string, AnalyticFunction>> anchor_fleet() {
  std::vector<std::pair<std::string, AnalyticFunction>> fleet;
  fleet.emplace_back("z", identity());
  fleet.emplace_back("1+z", affine(Complex(1.0), Complex(1.0)));
  fleet.emplace_back("(1-z)^-0.2", branch_power(0.2));
  fleet.emplace_back("z-0.5", affine(Complex(-0.5), Complex(1.0)));
  return fleet;
}

inline RieszMeasure measure_d0() {
  return RieszMeasure::atom(Complex(0.0), 1.0);
}
inline RieszMeasure measure_d05() {
  return RieszMeasure::atom(Complex(0.5), 1.0);
}
inline RieszMeasure measure_pair() {
  return RieszMeasure::atom(Complex(0.3), 1.0) +
         RieszMeasure::atom(Complex(0.0, -0.4), 1.0);
}
inline RieszMeasure measure_u05() { return RieszMeasure::radial(0.5); }

}  // namespace vdetail

/// Centered unit atom: all three norm routes (weighted boundary, weighted
/// interior, classical) must agree pairwise to 1e-6 on the anchor fleet.
inline CheckResult check_classical_anchor() {
  CheckResult res{1, vdetail::check_info(1).tag, vdetail::check_info(1).name,
                  false, ""};
  const auto d0 = vdetail::measure_d0();
  QuadratureOptions opt;
  opt.tol = 1e-9;
  double worst = 0.0;
  bool complete = true;
  for (const auto& [name, f] : vdetail::anchor_fleet()) {
    const NormReport rep = norm_report(f, 2.0, d0, true, opt);
    if (!rep.interior_value || !rep.classical_value) {
      complete = false;
      continue;
    }
    const double b = rep.boundary_value.value;
    const double i = rep.interior_value->value;
    const double c = rep.classical_value->value;
    worst = std::max(worst, std::fabs(b - i) / b);
    worst = std::max(worst, std::fabs(b - c) / b);
    worst = std::max(worst, std::fabs(i - c) / i);
  }
  res.pass = complete && worst <= 1e-6;
  res.detail =
      "worst pairwise route gap " + vdetail::num(worst) + " (tol 1e-6)";
  if (!complete) res.detail += "; a route was unavailable";
  return res;
}

/// Boundary-trace and interior-Laplacian norm routes agree to 1e-3 across
/// three measures and the full anchor fleet.
inline CheckResult check_route_agreement() {
  CheckResult res{2, vdetail::check_info(2).tag, vdetail::check_info(2).name,
                  false, ""};
  const std::vector<RieszMeasure> measures = {
      vdetail::measure_d05(), vdetail::measure_pair(), vdetail::measure_u05()};
  double worst = 0.0;
  bool finite = true;
  for (const auto& nu : measures) {
    QuadratureOptions opt;
    opt.tol = nu.has_radial() ? 1e-7 : 1e-8;
    for (const auto& [name, f] : vdetail::anchor_fleet()) {
      const NormValue b = weighted_norm_boundary(f, 2.0, nu, opt);
      const NormValue in = weighted_norm_interior(f, 2.0, nu, opt);
      if (b.verdict != Verdict::finite || in.verdict != Verdict::finite) {
        finite = false;
        continue;
      }
      worst = std::max(worst,
                       std::fabs(b.quad.value - in.quad.value) / b.quad.value);
    }
  }
  res.pass = finite && worst <= 1e-3;
  res.detail = "worst |boundary-interior|/boundary " + vdetail::num(worst) +
               " over 12 fixture rows (tol 1e-3)";
  if (!finite) res.detail += "; unexpected divergence";
  return res;
}

/// Level-set functionals are nondecreasing along the default r-grid (up to
/// twice the summed quadrature error) and approach the boundary integral:
/// at r = -0.001 the remaining gap stays within 1e-3 for atomic measures.
/// Fixtures are scaled so the O(|r|) approach term sits inside that budget.
inline CheckResult check_level_set_limit() {
  CheckResult res{3, vdetail::check_info(3).tag, vdetail::check_info(3).name,
                  false, ""};
  std::vector<std::pair<std::string, AnalyticFunction>> fleet;
  fleet.emplace_back("z/2", polynomial({Complex(0.0), Complex(0.5)}));
  fleet.emplace_back("1+z/2", affine(Complex(1.0), Complex(0.5)));
  fleet.emplace_back("1+0.3z+0.2z^2",
                     polynomial({Complex(1.0), Complex(0.3), Complex(0.2)}));

  double worst_drop = 0.0, drop_budget = 0.0, worst_limit = 0.0;
  auto sweep = [&](const RieszMeasure& nu, const AnalyticFunction& f,
                   const QuadratureOptions& opt, bool check_limit) {
    const TestDensity d = density_abs_p(f, 2.0);
    double prev = -kInf, err_sum = 0.0, last = 0.0, drop = 0.0;
    for (double r : default_r_grid()) {
      const QuadratureResult q = demailly_functional(nu, r, d, opt);
      err_sum += q.error_estimate;
      if (q.value < prev) drop = std::max(drop, prev - q.value);
      prev = q.value;
      last = q.value;
    }
    worst_drop = std::max(worst_drop, drop);
    drop_budget = std::max(drop_budget, 2.0 * err_sum);
    if (drop > 2.0 * err_sum) return false;
    if (check_limit) {
      auto trace = [&f](double theta) {
        const double m = std::abs(f(DiskPoint{0.0, theta}));
        return m * m;
      };
      const CircleResult lim =
          mu_u(nu, trace, hdetail::power_marks(f, 2.0), opt);
      const double gap = std::fabs(last - lim.quad.value);
      worst_limit = std::max(worst_limit, gap);
      if (gap > 1e-3) return false;
    }
    return true;
  };

  bool ok = true;
  for (const auto& nu : {vdetail::measure_d05(), vdetail::measure_pair()})
    for (const auto& [name, f] : fleet) ok = sweep(nu, f, {}, true) && ok;
  {
    QuadratureOptions opt;
    opt.tol = 1e-7;
    ok = sweep(vdetail::measure_u05(), fleet[1].second, opt, false) && ok;
  }
  res.pass = ok;
  res.detail = "worst drop " + vdetail::num(worst_drop) + " vs budget " +
               vdetail::num(drop_budget) + "; worst limit gap " +
               vdetail::num(worst_limit) + " (tol 1e-3)";
  return res;
}

/// The borderline trace (1-z)^{-0.3} against the beta = 0.5 radial weight:
/// classically inside (norm matching the Gamma-function closed form) but
/// outside the weighted space, with the truncated-mass growth exponent
/// matching the predicted -0.1 within 10%.
inline CheckResult check_counterexample() {
  CheckResult res{4, vdetail::check_info(4).tag, vdetail::check_info(4).name,
                  false, ""};
  const auto u05 = vdetail::measure_u05();
  const MembershipReport rep = membership(branch_power(0.3), 2.0, u05);
  const NormValue cl = classical_norm(branch_power(0.3), 2.0);
  const double oracle =
      std::sqrt(std::tgamma(0.4) / (std::tgamma(0.7) * std::tgamma(0.7)));
  const double norm_gap = std::fabs(cl.quad.value - oracle) / oracle;
  const double slope_err = std::fabs(rep.fitted_slope - (-0.1));
  res.pass = cl.verdict == Verdict::finite && norm_gap <= 1e-4 &&
             rep.classical_member && rep.verdict == Membership::non_member &&
             std::fabs(rep.weighted_exponent - 1.1) <= 1e-9 &&
             slope_err <= 0.01;
  res.detail = "classical norm gap " + vdetail::num(norm_gap) +
               " (tol 1e-4); combined exponent " +
               vdetail::num(rep.weighted_exponent) + "; fitted mass slope " +
               vdetail::num(rep.fitted_slope) + " (target -0.1 pm 0.01)";
  return res;
}

/// Near-boundary behaviour of the radial potential: u(t) < 0, increasing in
/// t, |u(t)| <= 4 (1-t)^{0.4}, and the fitted contact exponent within 15%
/// of 1 - beta = 0.5.
inline CheckResult check_contact_rate() {
  CheckResult res{5, vdetail::check_info(5).tag, vdetail::check_info(5).name,
                  false, ""};
  const auto u05 = vdetail::measure_u05();
  std::vector<double> xs, ys;
  bool negative = true, increasing = true, bounded = true;
  double prev = -kInf;
  for (int k = 1; k <= 4; ++k) {
    const double gap = std::pow(10.0, -k);
    const double uv = evaluate_u(u05, DiskPoint{gap, 0.0});
    negative = negative && uv < 0.0;
    increasing = increasing && uv > prev;
    bounded = bounded && std::fabs(uv) <= 4.0 * std::pow(gap, 0.4);
    prev = uv;
    xs.push_back(std::log(gap));
    ys.push_back(std::log(-uv));
  }
  const double slope = vdetail::fit_slope(xs, ys);
  res.pass = negative && increasing && bounded &&
             std::fabs(slope - 0.5) <= 0.075;
  res.detail = "fitted contact exponent " + vdetail::num(slope) +
               " (target 0.5 pm 0.075)";
  if (!negative || !increasing) res.detail += "; sign/monotonicity violated";
  if (!bounded) res.detail += "; envelope bound violated";
  return res;
}

/// Boundary-density profile of the radial weight: positive lower bound
/// stable under grid doubling, +inf sentinel with exponent metadata at the
/// contact angle, exact Fubini mass identity, and the theta^{-beta} blow-up
/// rate within 5%.
inline CheckResult check_density_profile() {
  CheckResult res{6, vdetail::check_info(6).tag, vdetail::check_info(6).name,
                  false, ""};
  const auto u05 = vdetail::measure_u05();
  const double lb1 = density_lower_bound(u05, 4096);
  const double lb2 = density_lower_bound(u05, 8192);
  const double lb_drift = std::fabs(lb1 - lb2) / lb1;

  const bool sentinel = std::isinf(boundary_density(u05, 0.0));
  const auto marks = boundary_density_of(u05).singular_angles;
  const bool metadata = marks.size() == 1 && marks[0].theta == 0.0 &&
                        std::fabs(marks[0].exponent - 0.5) <= 1e-12;

  auto one = [](double) { return 1.0; };
  const CircleResult mass = mu_u(u05, one, {}, {});
  const double fubini = std::fabs(mass.quad.value - total_mass(u05));

  std::vector<double> xs, ys;
  for (int k = 2; k <= 5; ++k) {
    const double theta = std::pow(10.0, -k);
    xs.push_back(std::log(theta));
    ys.push_back(std::log(boundary_density(u05, theta)));
  }
  const double slope = vdetail::fit_slope(xs, ys);

  res.pass = lb1 > 0.0 && lb_drift <= 1e-3 && sentinel && metadata &&
             fubini <= 1e-8 && std::fabs(slope + 0.5) <= 0.025;
  res.detail = "lower bound " + vdetail::num(lb1) + " (drift " +
               vdetail::num(lb_drift) + "); fubini gap " +
               vdetail::num(fubini) + "; blow-up slope " + vdetail::num(slope) +
               " (target -0.5 pm 0.025)";
  if (!sentinel || !metadata) res.detail += "; sentinel metadata missing";
  return res;
}

/// Weak-* convergence of the level-set measures: the pairing gap decreases
/// along the r-grid (strictly, once above the 1e-12 quadrature floor; the
/// constant test function pairs exactly and sits on the floor throughout)
/// and ends below 1e-2.
inline CheckResult check_weak_star() {
  CheckResult res{7, vdetail::check_info(7).tag, vdetail::check_info(7).name,
                  false, ""};
  const auto d05 = vdetail::measure_d05();
  const auto h = harmonic_re(power(affine(Complex(1.0), Complex(-0.8)), -1.0));
  const std::vector<std::pair<std::string, HarmonicFunction>> phis = {
      {"1", harmonic_re(constant(Complex(1.0)))},
      {"Re z", harmonic_re(identity())}};
  bool ok = true;
  double worst_final = 0.0;
  for (const auto& [name, phi] : phis) {
    std::vector<double> gaps;
    for (double r : default_r_grid())
      gaps.push_back(weak_star_gap(d05, h, phi, r));
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k)
      ok = ok && (gaps[k + 1] < gaps[k] || gaps[k + 1] <= 1e-12);
    ok = ok && gaps.back() <= 1e-2;
    worst_final = std::max(worst_final, gaps.back());
  }
  res.pass = ok;
  res.detail = "final gap " + vdetail::num(worst_final) +
               " at r = -0.001 (tol 1e-2); decreasing along the grid";
  return res;
}

/// Dividing out the zero factor preserves the weighted norm across
/// independent routes, and the deflated factor is nonvanishing on a 64x64
/// polar grid.
inline CheckResult check_deflation() {
  CheckResult res{8, vdetail::check_info(8).tag, vdetail::check_info(8).name,
                  false, ""};
  const auto d03 = RieszMeasure::atom(Complex(0.3), 1.0);
  std::vector<std::pair<std::string, AnalyticFunction>> fleet;
  fleet.emplace_back("z-0.5", affine(Complex(-0.5), Complex(1.0)));
  fleet.emplace_back("(z-0.5)(z+0.5i)",
                     affine(Complex(-0.5), Complex(1.0)) *
                         affine(Complex(0.0, 0.5), Complex(1.0)));
  double worst_gap = 0.0, min_mod = kInf;
  bool ok = true;
  for (const auto& [name, f] : fleet) {
    for (double p : {0.5, 1.0, 2.0}) {
      const Deflation d = deflate(f, p, d03);
      const double fz = d.report.f_norm.quad.value;
      const double gz = d.report.g_norm.quad.value;
      const double gap = std::fabs(gz - fz) / fz;
      worst_gap = std::max(worst_gap, gap);
      ok = ok && gap <= 1e-3;
      for (int j = 0; j < 64; ++j)
        for (int k = 0; k < 64; ++k) {
          const double rho = (j + 0.5) / 64.0;
          const double th = kTwoPi * k / 64.0;
          min_mod = std::min(
              min_mod, std::abs(d.zero_free(Complex(std::polar(rho, th)))));
        }
      ok = ok && min_mod > 0.0;
    }
  }
  res.pass = ok;
  res.detail = "worst norm gap " + vdetail::num(worst_gap) +
               " (tol 1e-3); min |g| on the grid " + vdetail::num(min_mod);
  return res;
}

/// Multiplication by the outer factor A^{1/p} carries weighted norms onto
/// classical ones within 1e-3, and inverting recovers the input to 1e-10.
inline CheckResult check_isometry() {
  CheckResult res{9, vdetail::check_info(9).tag, vdetail::check_info(9).name,
                  false, ""};
  std::vector<std::pair<std::string, AnalyticFunction>> fleet;
  fleet.emplace_back("1", constant(Complex(1.0)));
  fleet.emplace_back("1+z", affine(Complex(1.0), Complex(1.0)));
  fleet.emplace_back("z-0.5", affine(Complex(-0.5), Complex(1.0)));
  double worst_gap = 0.0, worst_round = 0.0;
  bool ok = true;
  for (const auto& nu : {vdetail::measure_d05(), vdetail::measure_pair()}) {
    for (const auto& [name, f] : fleet) {
      for (double p : {1.5, 2.0}) {
        const IsometryReport rep = isometry_check(f, p, nu);
        const double w = rep.weighted.quad.value;
        const double c = rep.classical.quad.value;
        const double gap = std::fabs(c - w) / w;
        worst_gap = std::max(worst_gap, gap);
        worst_round = std::max(worst_round, rep.roundtrip);
        ok = ok && gap <= 1e-3 && rep.roundtrip <= 1e-10;
      }
    }
  }
  res.pass = ok;
  res.detail = "worst norm gap " + vdetail::num(worst_gap) +
               " (tol 1e-3); worst round-trip " + vdetail::num(worst_round) +
               " (tol 1e-10)";
  return res;
}

/// Green-witness probe of the unit ball: the atom sweep for z + 0.5 rises
/// toward the boundary supremum 2.25 and crosses 1 at a reported witness,
/// while 0.9z stays inside the ball at every probe.
inline CheckResult check_unit_ball_probe() {
  CheckResult res{10, vdetail::check_info(10).tag, vdetail::check_info(10).name,
                  false, ""};
  const std::vector<double> grid = {0.9, 0.99, 0.999, 0.9999};
  const ProbeReport out =
      ball_probe(affine(Complex(0.5), Complex(1.0)), 2.0, grid);
  bool increasing = true;
  for (std::size_t k = 0; k + 1 < out.rows.size(); ++k)
    increasing = increasing && out.rows[k + 1].value > out.rows[k].value;
  const bool toward = out.max_value < 2.25 && out.rows.back().value >= 2.2;
  const bool witnessed = out.witness.has_value() && !out.all_within_unit;

  const ProbeReport inside =
      ball_probe(affine(Complex(0.0), Complex(0.9)), 2.0, grid);
  res.pass = increasing && toward && witnessed && inside.all_within_unit &&
             !inside.witness.has_value();
  res.detail = "sweep tops at " + vdetail::num(out.max_value) +
               " (bound 2.25); witness t = " +
               (out.witness ? vdetail::num(*out.witness) : std::string("none")) +
               "; contraction max " + vdetail::num(inside.max_value);
  return res;
}

/// Norm semicontinuity proxy: Taylor partial sums of (1-z)^{-0.2} must carry
/// bounded weighted norms whose supremum reaches the limit norm within 1e-3.
/// The approach is a 0.1-power of the truncation scale, so at desk-scale
/// degrees the supremum sits macroscopically below the limit and the check
/// reports the deficit.
inline CheckResult check_semicontinuity() {
  CheckResult res{11, vdetail::check_info(11).tag, vdetail::check_info(11).name,
                  false, ""};
  const auto u05 = vdetail::measure_u05();
  const double full =
      weighted_norm_boundary(branch_power(0.2), 2.0, u05).quad.value;
  double sup = 0.0;
  bool bounded = true;
  for (std::size_t n : {std::size_t{8}, std::size_t{32}, std::size_t{128}}) {
    const auto c = taylor_one_minus_pow(0.2, n + 1);
    std::vector<Complex> coeffs(c.begin(), c.end());
    const NormValue v = weighted_norm_boundary(polynomial(coeffs), 2.0, u05);
    bounded = bounded && v.verdict == Verdict::finite && v.quad.value <= 10.0;
    sup = std::max(sup, v.quad.value);
  }
  res.pass = bounded && full <= sup + 1e-3;
  res.detail = "partial-sum sup " + vdetail::num(sup) + "; limit norm " +
               vdetail::num(full) + "; deficit " + vdetail::num(full - sup) +
               " vs allowance 1e-3 (slow 0.1-power tail)";
  return res;
}

inline CheckResult run_check(int id) {
  try {
    switch (id) {
      case 1: return check_classical_anchor();
      case 2: return check_route_agreement();
      case 3: return check_level_set_limit();
      case 4: return check_counterexample();
      case 5: return check_contact_rate();
      case 6: return check_density_profile();
      case 7: return check_weak_star();
      case 8: return check_deflation();
      case 9: return check_isometry();
      case 10: return check_unit_ball_probe();
      case 11: return check_semicontinuity();
      default: domain_fail("check id out of range");
    }
  } catch (const std::exception& e) {
    CheckResult res{id, vdetail::check_info(id).tag,
                    vdetail::check_info(id).name, false, ""};
    res.detail = std::string("exception: ") + e.what();
    return res;
  }
}

inline const std::vector<int>& all_check_ids() {
  static const std::vector<int> ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  return ids;
}

/// Suite names: "all", "core" (the cross-route, level-set, deflation, and
/// isometry checks), or an explicit comma-separated id list like "1,4,10".
inline std::vector<int> suite_checks(const std::string& suite) {
  if (suite == "all") return all_check_ids();
  if (suite == "core") return {2, 3, 8, 9};
  std::vector<int> ids;
  for (double v : parse_grid(suite, "suite")) {
    const int id = int(v);
    if (double(id) != v || id < 1 || id > 11)
      throw std::invalid_argument(
          "suite: expected 'all', 'core', or check ids between 1 and 11");
    ids.push_back(id);
  }
  return ids;
}

/// One human-readable report line per check.
inline std::string check_line(const CheckResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "C%02d [%-8s] %-26s %s  ", r.id,
                r.tag.c_str(), r.name.c_str(), r.pass ? "PASS" : "FAIL");
  return buf + r.detail;
}

}  // namespace pshlab
