#pragma once

// Hot/cool parts of a 2-d caustic. Along x = x_t(lambda) the action
// difference f(x0) - f(lambda) has a triple root at x0 = lambda; the cofactor
// F~ and G~ = 3F~ + (x0 - lambda)F~' locate candidate boundaries.

#include <algorithm>
#include <cmath>
#include <limits>

#include "burgers/geometry/caustic.hpp"

namespace burgers::geometry {

struct HotCoolSymbolic {
  Polynomial F;      ///< F~ in (x0, lambda, t), primitive
  Polynomial G;      ///< G~ in (x0, lambda, t), primitive
  Polynomial discF;  ///< disc_x0 F~, lambda-part
  Polynomial discG;
};

/// Numerator of t*f along the caustic parameterisation, as a polynomial in (x0, lambda, t).
inline Polynomial action_on_caustic(const ReducedAction& ra, const CausticData& cd) {
  if (cd.dimension != 2) throw GeometryError("hot/cool implemented for d = 2");
  RationalFunction f(ra.tf);
  f = f.substitute("x", cd.preparam[0]);
  f = f.substitute("y", cd.preparam[1]);
  return f.numerator();
}

inline HotCoolSymbolic hot_cool_symbolic(const ReducedAction& ra, const CausticData& cd) {
  const Polynomial num = action_on_caustic(ra, cd);
  // f(lambda) is num with x0 -> lambda.
  const Polynomial at_lambda = num.substitute("x0", polyalg::var("lambda"));
  const Polynomial F_lambda = num - at_lambda;
  const Polynomial lin = polyalg::var("x0") - polyalg::var("lambda");
  Polynomial Ft;
  try {
    Ft = polyalg::exact_divide(F_lambda, lin.pow(3));
  } catch (const polyalg::DivisionError& e) {
    throw GeometryError(std::string("deflation by (x0 - lambda)^3 failed: ") + e.what());
  }
  HotCoolSymbolic out;
  out.F = strip_monomial_content(Ft);
  out.G = strip_monomial_content(Ft.scaled(Rational(3)) + lin * Ft.derivative("x0"));
  if (out.F.degree("x0") >= 2) out.discF = lambda_part(polyalg::discriminant(out.F, "x0"));
  if (out.G.degree("x0") >= 2) out.discG = lambda_part(polyalg::discriminant(out.G, "x0"));
  return out;
}

enum class Temperature { Cool, Hot };

inline const char* to_string(Temperature t) { return t == Temperature::Cool ? "cool" : "hot"; }

struct HotCoolLabel {
  double lambda = 0;
  std::vector<double> point;
  Temperature label = Temperature::Cool;
  bool boundary_flag = false;  ///< disc F~ or disc G~ vanishes at (lambda, t)
  bool tie = false;            ///< another critical value equals f(lambda) within tolerance
  double margin = 0;           ///< min over other real critical points of f_other - f(lambda)
};

struct HotCoolOptions {
  double tie_tolerance = 1e-12;      ///< relative
  double boundary_tolerance = 1e-9;  ///< relative size of disc at (lambda, t)
};

/// Brute-force label: f(lambda) against f at every other real critical point at x_t(lambda).
inline HotCoolLabel hot_cool(const ReducedAction& ra, const CausticData& cd, const HotCoolSymbolic& sym, double lambda,
                             const Rational& t, const HotCoolOptions& opt = {}) {
  if (t <= 0) throw GeometryError("hot/cool requires t > 0");
  const Rational lam = polyalg::from_double(lambda);
  for (double s : cd.singular_params(t)) {
    if (std::fabs(s - lambda) < 1e-14) throw GeometryError("lambda is a singular parameter of the caustic");
  }
  HotCoolLabel out;
  out.lambda = lambda;
  out.point = cd.point(lambda, t.get_d());
  const auto xs = cd.point_exact(lam, t);
  const Polynomial fp = ra.tf.derivative("x0").substitute({{"x", Polynomial(xs[0])}, {"y", Polynomial(xs[1])}, {"t", Polynomial(t)}});
  const Polynomial lin = polyalg::var("x0") - Polynomial(lam);
  const Polynomial rest = polyalg::exact_divide(fp, lin * lin);
  const Polynomial fx = ra.tf.substitute({{"x", Polynomial(xs[0])}, {"y", Polynomial(xs[1])}, {"t", Polynomial(t)}});
  const double f0 = fx.evaluate(std::map<std::string, double>{{"x0", lambda}});
  double margin = std::numeric_limits<double>::infinity();
  double scale = std::fabs(f0);
  if (!rest.is_constant()) {
    for (double r : polyalg::real_roots(rest.univariate("x0"))) {
      const double v = fx.evaluate(std::map<std::string, double>{{"x0", r}});
      scale = std::max(scale, std::fabs(v));
      margin = std::min(margin, v - f0);
    }
  }
  out.margin = margin / t.get_d();
  const double tol = opt.tie_tolerance * std::max(1.0, scale);
  out.tie = std::isfinite(margin) && std::fabs(margin) <= tol;
  out.label = margin >= -tol ? Temperature::Cool : Temperature::Hot;
  const std::map<std::string, double> at{{"lambda", lambda}, {"t", t.get_d()}};
  auto near_zero = [&](const Polynomial& d) { return !d.is_zero() && relative_value(d, at) < opt.boundary_tolerance; };
  out.boundary_flag = near_zero(sym.discF) || near_zero(sym.discG);
  return out;
}

struct HotCoolBoundary {
  double lambda = 0;
  std::vector<double> point;
  char source = 'F';      ///< 'F' or 'G': which discriminant vanishes
  bool label_change = false;
};

/// Real roots of disc F~ and disc G~ at time t, each tested for a label change at lambda +- delta.
inline std::vector<HotCoolBoundary> hot_cool_boundaries(const ReducedAction& ra, const CausticData& cd,
                                                        const HotCoolSymbolic& sym, const Rational& t,
                                                        double delta = 1e-6) {
  std::vector<HotCoolBoundary> out;
  const auto sing = cd.singular_params(t);
  for (char src : {'F', 'G'}) {
    const Polynomial& d = src == 'F' ? sym.discF : sym.discG;
    if (d.is_zero() || !d.has_variable("lambda")) continue;
    for (double l : real_roots_in(d, "lambda", {{"t", t}})) {
      bool singular = false;
      for (double s : sing) singular = singular || std::fabs(s - l) < 10 * delta;
      if (singular) continue;
      HotCoolBoundary b;
      b.lambda = l;
      b.point = cd.point(l, t.get_d());
      b.source = src;
      const auto lo = hot_cool(ra, cd, sym, l - delta, t);
      const auto hi = hot_cool(ra, cd, sym, l + delta, t);
      b.label_change = lo.label != hi.label;
      out.push_back(b);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

}  // namespace burgers::geometry
