#pragma once

// Sampled verification of cusp structure (d = 2):
//  - cusps of level curves H_t^c sit where the pre-level curve
//    S0 + t|grad S0|^2/2 = c meets the pre-caustic det(I + t Hess S0) = 0;
//  - there the pre-level tangent lies in the kernel of I + t Hess S0;
//  - Maxwell-set cusps are images of pre-Maxwell x pre-caustic points.

#include <algorithm>
#include <cmath>

#include "burgers/geometry/maxwell.hpp"

namespace burgers::geometry {

/// S0 + t |grad S0|^2 / 2 - c in (x0, y0, t, c).
inline Polynomial pre_level(const Polynomial& S0) {
  const Polynomial sx = S0.derivative("x0"), sy = S0.derivative("y0");
  return S0 + polyalg::var("t") * (sx * sx + sy * sy).scaled(polyalg::make_rational(1, 2)) - polyalg::var("c");
}

struct LevelCusp {
  double x0 = 0, y0 = 0;
  std::vector<double> x;
  double caustic_residual = 0;  ///< relative |C_t(x)|
  double tangent_sin = 0;       ///< |sin| of the angle between pre-level tangent and ker(I + t Hess S0)
  double image_speed = 0;       ///< |DPhi v| / |v| for the unit pre-level tangent v
  double level_gradient = 0;    ///< |grad L|; near zero the pre-level curve is itself singular
};

namespace detail {

struct PreCurves {
  Polynomial L;  // pre-level at fixed (t, c)
  Polynomial J;  // pre-caustic at fixed t
  Polynomial Hxx, Hxy, Hyy;  // I + t Hess S0 entries at fixed t
};

inline PreCurves pre_curves(const Polynomial& S0, const Rational& t, const Rational& c) {
  PreCurves pc;
  pc.L = pre_level(S0).substitute({{"t", Polynomial(t)}, {"c", Polynomial(c)}});
  const Polynomial tt(t);
  pc.Hxx = Polynomial(1) + tt * S0.derivative("x0").derivative("x0");
  pc.Hxy = tt * S0.derivative("x0").derivative("y0");
  pc.Hyy = Polynomial(1) + tt * S0.derivative("y0").derivative("y0");
  pc.J = pc.Hxx * pc.Hyy - pc.Hxy * pc.Hxy;
  return pc;
}

inline LevelCusp describe_cusp(const PreCurves& pc, const action::FlowMap& fm, const Polynomial& C, double x0, double y0,
                               double t) {
  LevelCusp lc;
  lc.x0 = x0;
  lc.y0 = y0;
  lc.x = fm.evaluate({x0, y0}, t);
  const std::map<std::string, double> at0{{"x0", x0}, {"y0", y0}};
  // Tangent to L = c: v = (-L_y, L_x).
  double vx = -pc.L.derivative("y0").evaluate(at0), vy = pc.L.derivative("x0").evaluate(at0);
  const double nv = std::hypot(vx, vy);
  lc.level_gradient = nv;
  if (nv > 0) vx /= nv, vy /= nv;
  const double a = pc.Hxx.evaluate(at0), b = pc.Hxy.evaluate(at0), d = pc.Hyy.evaluate(at0);
  lc.image_speed = std::hypot(a * vx + b * vy, b * vx + d * vy);
  // Kernel direction of the singular symmetric matrix [[a, b], [b, d]]: take the eigenvector of the smaller eigenvalue.
  const double tr = a + d, disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4 * b * b));
  const double mu = 0.5 * (tr - (tr >= 0 ? 1 : -1) * disc);
  double ex = b, ey = mu - a;
  if (std::hypot(ex, ey) < 1e-300) ex = mu - d, ey = b;
  if (std::hypot(ex, ey) < 1e-300) ex = 1, ey = 0;
  const double ne = std::hypot(ex, ey);
  lc.tangent_sin = std::fabs(vx * ey / ne - vy * ex / ne);
  const std::map<std::string, double> at{{"x", lc.x[0]}, {"y", lc.x[1]}, {"t", t}};
  lc.caustic_residual = relative_value(C, at);
  return lc;
}

}  // namespace detail

/// Pre-level x pre-caustic intersections at (t, c), mapped to x. Requires the pre-caustic affine in y0.
inline std::vector<LevelCusp> level_cusps_exact(const ReducedAction& ra, const Polynomial& C, const Rational& t,
                                                const Rational& c) {
  const auto pc = detail::pre_curves(ra.S0, t, c);
  if (pc.J.degree("y0") != 1) throw GeometryError("pre-caustic is not affine in y0");
  const auto cs = pc.J.coefficients("y0");
  const auto ls = pc.L.coefficients("y0");
  const int n = static_cast<int>(ls.size()) - 1;
  Polynomial num;
  for (int k = 0; k <= n; ++k) num += ls[k] * (-cs[0]).pow(k) * cs[1].pow(n - k);
  std::vector<LevelCusp> out;
  if (num.is_constant()) return out;
  action::InitialData id;
  id.dimension = 2;
  id.S0 = ra.S0;
  const auto fm = action::build_flow(id);
  for (const auto& r : polyalg::roots(num.univariate("x0")).real_roots) {
    const std::map<std::string, double> at{{"x0", r.value}};
    const double den = cs[1].evaluate(at);
    if (den == 0.0) continue;
    const double y0 = -cs[0].evaluate(at) / den;
    out.push_back(detail::describe_cusp(pc, fm, C, r.value, y0, t.get_d()));
  }
  return out;
}

/// Cusps found by tracing the pre-level curve along vertical lines x0 = const
/// and bisecting sign changes of the pre-caustic on each matched branch.
inline std::vector<LevelCusp> level_cusps_sampled(const ReducedAction& ra, const Polynomial& C, const Rational& t,
                                                  const Rational& c, double x0_lo, double x0_hi, int samples) {
  const auto pc = detail::pre_curves(ra.S0, t, c);
  action::InitialData id;
  id.dimension = 2;
  id.S0 = ra.S0;
  const auto fm = action::build_flow(id);
  auto ys = [&](double x0) { return real_roots_in(pc.L, "y0", {{"x0", polyalg::from_double(x0)}}); };
  auto jv = [&](double x0, double y0) { return pc.J.evaluate(std::map<std::string, double>{{"x0", x0}, {"y0", y0}}); };
  std::vector<LevelCusp> out;
  double prev_x = x0_lo;
  auto prev = ys(prev_x);
  for (int i = 1; i <= samples; ++i) {
    const double cur_x = x0_lo + (x0_hi - x0_lo) * i / samples;
    const auto cur = ys(cur_x);
    if (cur.size() == prev.size()) {
      for (std::size_t b = 0; b < cur.size(); ++b) {
        double lo = prev_x, hi = cur_x, ylo = prev[b], yhi = cur[b];
        double jlo = jv(lo, ylo);
        if (jlo == 0.0 || (jlo > 0) == (jv(hi, yhi) > 0)) continue;
        bool lost = false;
        for (int it = 0; it < 60 && hi - lo > 1e-15 * (1 + std::fabs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const auto ym = ys(mid);
          if (ym.empty()) { lost = true; break; }
          const double guess = 0.5 * (ylo + yhi);
          double best = ym.front();
          for (double y : ym) if (std::fabs(y - guess) < std::fabs(best - guess)) best = y;
          const double jm = jv(mid, best);
          if ((jm > 0) == (jlo > 0)) lo = mid, ylo = best, jlo = jm;
          else hi = mid, yhi = best;
        }
        if (lost) continue;
        out.push_back(detail::describe_cusp(pc, fm, C, 0.5 * (lo + hi), 0.5 * (ylo + yhi), t.get_d()));
      }
    }
    prev_x = cur_x;
    prev = cur;
  }
  return out;
}

struct CheckLine {
  std::string name;
  bool pass = false;
  double observed = 0;
  double tolerance = 0;
  std::string detail;
};

struct CuspReport {
  std::vector<LevelCusp> sampled;
  std::vector<LevelCusp> exact;
  std::vector<MaxwellCusp> maxwell_cusps;  ///< multiplicity-1 intersections only
  std::vector<CheckLine> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

struct CuspCheckOptions {
  double x0_lo = -3, x0_hi = 3;
  int samples = 600;
  double caustic_tol = 1e-8;
  double tangent_tol = 1e-8;
  double singular_tol = 1e-10;  ///< |grad L| below this: pre-level curve singular, no tangent
  bool maxwell = true;
};

/// (i) sampled level cusps lie on C_t, (ii) pre-curve intersections are cusps with tangent along the kernel,
/// (iii) Maxwell cusps lie on C_t.
inline CuspReport cusp_and_normal_checks(const ReducedAction& ra, const Polynomial& C, const Rational& t,
                                         const std::vector<Rational>& levels, const CuspCheckOptions& opt = {}) {
  CuspReport rep;
  for (const auto& c : levels) {
    const auto s = level_cusps_sampled(ra, C, t, c, opt.x0_lo, opt.x0_hi, opt.samples);
    const auto e = level_cusps_exact(ra, C, t, c);
    double worst_c = 0, worst_sin = 0, worst_speed = 0;
    for (const auto& p : s) worst_c = std::max(worst_c, p.caustic_residual);
    std::size_t in_window = 0, singular = 0;
    for (const auto& p : e) {
      if (p.x0 < opt.x0_lo || p.x0 > opt.x0_hi) continue;
      if (p.level_gradient < opt.singular_tol) {
        ++singular;
        continue;
      }
      ++in_window;
      worst_sin = std::max(worst_sin, p.tangent_sin);
      worst_speed = std::max(worst_speed, p.image_speed);
      worst_c = std::max(worst_c, p.caustic_residual);
    }
    const std::string tag = "c=" + c.get_str();
    rep.checks.push_back({"level cusps on caustic " + tag, worst_c < opt.caustic_tol, worst_c, opt.caustic_tol,
                          std::to_string(s.size()) + " sampled, " + std::to_string(in_window) + " exact, " +
                              std::to_string(singular) + " singular pre-level points skipped"});
    rep.checks.push_back({"sampled cusp count equals intersection count " + tag, s.size() == in_window,
                          static_cast<double>(s.size()), 0, std::to_string(in_window) + " intersections"});
    rep.checks.push_back({"tangent along kernel " + tag, worst_sin < opt.tangent_tol, worst_sin, opt.tangent_tol, ""});
    rep.checks.push_back({"image speed vanishes " + tag, worst_speed < opt.tangent_tol, worst_speed, opt.tangent_tol, ""});
    rep.sampled.insert(rep.sampled.end(), s.begin(), s.end());
    rep.exact.insert(rep.exact.end(), e.begin(), e.end());
  }
  if (opt.maxwell && ra.degree() >= 4) {
    const auto pm = pre_maxwell(ra);
    double worst = 0;
    for (const auto& m : premaxwell_precaustic_points(ra, pm, t)) {
      if (m.multiplicity != 1) continue;
      rep.maxwell_cusps.push_back(m);
      worst = std::max(worst, relative_value(C, {{"x", m.x[0]}, {"y", m.x[1]}, {"t", t.get_d()}}));
    }
    rep.checks.push_back({"Maxwell cusps on caustic", worst < opt.caustic_tol, worst, opt.caustic_tol,
                          std::to_string(rep.maxwell_cusps.size()) + " cusps"});
  }
  return rep;
}

}  // namespace burgers::geometry
