#pragma once

// Level surfaces H_t^c via rho_(t,c)(x) = R(f - c, f') and their double points
// gcd(rho^1, rho^2).

#include "burgers/geometry/caustic.hpp"

namespace burgers::geometry {

/// rho in (x, y[, z], t, c): resultant in x0 of t(f - c) and t f'.
inline Polynomial level_surface_symbolic(const ReducedAction& ra) {
  const Polynomial t = polyalg::var("t");
  const Polynomial c = polyalg::var("c");
  return polyalg::resultant(ra.tf - t * c, ra.tf.derivative("x0"), "x0");
}

/// rho_(t,c)(x) for fixed rational c and t > 0, normalised to content 1.
inline Polynomial level_surface(const ReducedAction& ra, const Rational& c, const Rational& t) {
  if (t <= 0) throw GeometryError("level surface requires t > 0");
  const Polynomial tf = ra.tf.substitute("t", t);
  const Polynomial rho = polyalg::resultant(tf - Polynomial(t * c), tf.derivative("x0"), "x0");
  return rho.primitive();
}

struct LevelDoublePoints {
  Polynomial rho;   ///< in (x, y, t, c)
  Polynomial rho1;  ///< R_c(rho, d rho/dx)
  Polynomial rho2;  ///< R_c(d rho/dx, d rho/dy)
  Polynomial gcd;   ///< double-point locus of the level family
};

/// Double points of the level surfaces over all c (d = 2).
inline LevelDoublePoints level_double_points(const ReducedAction& ra) {
  if (ra.dimension != 2) throw GeometryError("level double points implemented for d = 2");
  LevelDoublePoints out;
  out.rho = level_surface_symbolic(ra);
  const Polynomial rx = out.rho.derivative("x");
  const Polynomial ry = out.rho.derivative("y");
  out.rho1 = polyalg::resultant(out.rho, rx, "c");
  out.rho2 = polyalg::resultant(rx, ry, "c");
  out.gcd = polyalg::gcd(out.rho1, out.rho2);
  return out;
}

/// Square-free zero set with monomial factors in t removed (for comparing loci at t > 0).
inline Polynomial zero_set(const Polynomial& p) {
  Polynomial q = polyalg::squarefree_part(p);
  // Remove t-only factors, which do not vanish for t > 0.
  while (q.has_variable("t")) {
    auto div = polyalg::try_exact_divide(q, polyalg::var("t"));
    if (!div) break;
    q = *div;
  }
  return q.primitive();
}

}  // namespace burgers::geometry
