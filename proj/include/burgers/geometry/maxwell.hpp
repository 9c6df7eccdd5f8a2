#pragma once

// Maxwell-Klein set from the double discriminant D = disc_c(disc_x0(f - c)),
// its factorisation const * t^k * C_t^3 * B_t^2, crunode/acnode
// classification of B_t points, and the pre-Maxwell discriminant.

#include <algorithm>
#include <cmath>
#include <limits>

#include "burgers/geometry/level.hpp"

namespace burgers::geometry {

struct MaxwellKleinData {
  Polynomial D;         ///< double discriminant (c standing for t*c)
  Polynomial C;         ///< caustic equation
  Polynomial B;         ///< content 1, positive leading coefficient
  int c_exponent = 0;   ///< found by repeated exact division
  int b_exponent = 0;
  Polynomial constant;  ///< D / (C^c_exponent B^b_exponent): a rational times a power of t
};

inline Polynomial double_discriminant(const ReducedAction& ra) {
  const int n = ra.degree();
  if (n < 3) throw GeometryError("fewer than two critical points: f has degree " + std::to_string(n) + " in x0");
  const Polynomial inner = polyalg::discriminant(ra.tf - polyalg::var("c"), "x0");
  if (inner.degree("c") < 2) throw GeometryError("fewer than two critical points: inner discriminant is linear in c");
  return polyalg::discriminant(inner, "c");
}

/// Factor D as const * C^a * B^b with B square-free part of the cofactor.
inline MaxwellKleinData maxwell_klein(const ReducedAction& ra, const Polynomial& caustic_equation) {
  MaxwellKleinData out;
  out.D = double_discriminant(ra);
  out.C = caustic_equation;
  auto ext = polyalg::extract_factor(out.D, out.C);
  out.c_exponent = ext.exponent;
  if (ext.exponent == 0) throw GeometryError("caustic equation does not divide the double discriminant");
  // Only powers of t are split off; spatial monomials belong to B.
  const int tk = ext.cofactor.monomial_content().degree("t");
  const Polynomial mono = polyalg::var("t").pow(tk);
  Polynomial rest = tk == 0 ? ext.cofactor : polyalg::exact_divide(ext.cofactor, mono);
  const Polynomial prim = rest.primitive();
  const Rational scale = rest.leading_coefficient() / prim.leading_coefficient();
  if (prim.is_constant()) {
    out.B = Polynomial(1);
    out.b_exponent = 0;
    out.constant = mono.scaled(scale);
    return out;
  }
  Polynomial obstruction;
  const auto root = polyalg::exact_sqrt(prim, &obstruction);
  if (!root) {
    throw GeometryError("cofactor of C_t^" + std::to_string(out.c_exponent) +
                        " is not a perfect square; obstruction: " + polyalg::to_text(obstruction));
  }
  out.B = root->primitive();
  auto bext = polyalg::extract_factor(prim, out.B);
  out.b_exponent = bext.exponent;
  out.constant = (mono * bext.cofactor).scaled(scale);
  return out;
}

enum class DoublePointKind { Crunode, Acnode };

struct BPoint {
  double x = 0, y = 0;
  int real_critical_points = 0;
  int near_real_pairs = 0;
  double equal_value_gap = 0;  ///< min |f_i - f_j| over pairs of real critical points
  DoublePointKind kind = DoublePointKind::Acnode;
};

struct CriticalPoints {
  std::vector<double> x0;      ///< real roots of f'
  std::vector<double> values;  ///< f at each
  int near_real_pairs = 0;
};

/// Real critical points of f at a floating Eulerian point (d = 2).
inline CriticalPoints critical_points(const ReducedAction& ra, double x, double y, double t) {
  const Polynomial fp = ra.tf.derivative("x0");
  std::vector<Rational> sub{polyalg::from_double(x), polyalg::from_double(y)};
  Polynomial q = fp.substitute({{"x", Polynomial(sub[0])}, {"y", Polynomial(sub[1])}, {"t", Polynomial(polyalg::from_double(t))}});
  CriticalPoints out;
  if (q.is_constant()) return out;
  const auto rs = polyalg::roots(q.univariate("x0"));
  for (const auto& r : rs.real_roots) out.x0.push_back(r.value);
  for (const auto& c : rs.complex_pairs) out.near_real_pairs += c.near_real ? 1 : 0;
  for (double r : out.x0) {
    out.values.push_back(ra.tf.evaluate(std::map<std::string, double>{{"x0", r}, {"x", x}, {"y", y}, {"t", t}}) / t);
  }
  return out;
}

/// Points of B_t = 0 in a window, found along horizontal and vertical lines.
inline std::vector<std::pair<double, double>> sample_curve(const Polynomial& B, const Rational& t, double xlo, double xhi,
                                                           double ylo, double yhi, int lines) {
  std::vector<std::pair<double, double>> pts;
  const Polynomial bt = B.substitute("t", t);
  for (int i = 0; i <= lines; ++i) {
    const double xv = xlo + (xhi - xlo) * (i + 0.5) / (lines + 1);
    for (double yv : real_roots_in(bt, "y", {{"x", polyalg::from_double(xv)}})) {
      if (yv >= ylo && yv <= yhi) pts.emplace_back(xv, yv);
    }
    const double yl = ylo + (yhi - ylo) * (i + 0.5) / (lines + 1);
    for (double xw : real_roots_in(bt, "x", {{"y", polyalg::from_double(yl)}})) {
      if (xw >= xlo && xw <= xhi) pts.emplace_back(xw, yl);
    }
  }
  return pts;
}

/// Crunode (two real pre-images of equal action) versus acnode.
inline BPoint classify_b_point(const ReducedAction& ra, double x, double y, double t, double tol = 1e-10) {
  BPoint bp;
  bp.x = x;
  bp.y = y;
  const auto cp = critical_points(ra, x, y, t);
  bp.real_critical_points = static_cast<int>(cp.x0.size());
  bp.near_real_pairs = cp.near_real_pairs;
  bp.equal_value_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cp.values.size(); ++i) {
    for (std::size_t j = i + 1; j < cp.values.size(); ++j) {
      bp.equal_value_gap = std::min(bp.equal_value_gap, std::fabs(cp.values[i] - cp.values[j]));
    }
  }
  bp.kind = bp.equal_value_gap < tol ? DoublePointKind::Crunode : DoublePointKind::Acnode;
  return bp;
}

// ---- pre-Maxwell ------------------------------------------------------------

struct PreMaxwellData {
  Polynomial discriminant;      ///< disc_xc0 G in (x0, y0, t)
  Polynomial pre_maxwell;       ///< with pre-caustic and t factors removed, primitive
  int precaustic_exponent = 0;
  Polynomial pre_caustic;       ///< det(I + t Hess S0)
};

/// G(xc0) = (f(x0) - f(xc0)) / (x0 - xc0)^2 with x = Phi_t(x0); its discriminant in xc0.
inline PreMaxwellData pre_maxwell(const ReducedAction& ra) {
  if (ra.dimension != 2) throw GeometryError("pre-Maxwell implemented for d = 2");
  if (ra.degree() < 4) throw GeometryError("pre-Maxwell needs f of degree >= 4 in x0");
  action::InitialData id;
  id.dimension = 2;
  id.S0 = ra.S0;
  const auto fm = action::build_flow(id);
  PreMaxwellData out;
  out.pre_caustic = fm.jacobian_determinant();
  const std::map<std::string, Polynomial> at_flow{{"x", fm.Phi[0]}, {"y", fm.Phi[1]}};
  const Polynomial f_same = ra.tf.substitute(at_flow);
  const Polynomial f_other = ra.tf.rename("x0", "xc0").substitute(at_flow);
  const Polynomial diff = polyalg::var("x0") - polyalg::var("xc0");
  Polynomial G;
  try {
    G = polyalg::exact_divide(f_same - f_other, diff * diff);
  } catch (const polyalg::DivisionError& e) {
    throw GeometryError(std::string("pre-Maxwell deflation failed: ") + e.what());
  }
  out.discriminant = polyalg::discriminant(G, "xc0");
  auto ext = polyalg::extract_factor(out.discriminant, out.pre_caustic);
  out.precaustic_exponent = ext.exponent;
  Polynomial rest = ext.cofactor;
  while (rest.has_variable("t")) {
    auto q = polyalg::try_exact_divide(rest, polyalg::var("t"));
    if (!q) break;
    rest = *q;
  }
  out.pre_maxwell = rest.primitive();
  return out;
}

struct MaxwellCusp {
  double x0 = 0, y0 = 0;
  std::vector<double> x;  ///< image point
  int multiplicity = 1;   ///< 1: Maxwell-set cusp; >= 2: caustic cusp (Maxwell endpoint)
};

/// Intersections of the pre-Maxwell set with the pre-caustic, mapped forward (d = 2).
inline std::vector<MaxwellCusp> premaxwell_precaustic_points(const ReducedAction& ra, const PreMaxwellData& pm,
                                                            const Rational& t) {
  const Polynomial J = pm.pre_caustic;
  if (J.degree("y0") != 1) throw GeometryError("pre-caustic is not affine in y0");
  const auto cs = J.coefficients("y0");
  // y0 = -cs[0] / cs[1]: substitute into the pre-Maxwell polynomial and clear denominators.
  const auto pcs = pm.pre_maxwell.coefficients("y0");
  const int n = static_cast<int>(pcs.size()) - 1;
  Polynomial num;
  for (int k = 0; k <= n; ++k) {
    num += pcs[k] * (-cs[0]).pow(k) * cs[1].pow(n - k);
  }
  num = num.substitute("t", t);
  std::vector<MaxwellCusp> out;
  if (num.is_constant()) return out;
  const auto rs = polyalg::roots(num.univariate("x0"));
  action::InitialData id;
  id.dimension = 2;
  id.S0 = ra.S0;
  const auto fm = action::build_flow(id);
  for (const auto& r : rs.real_roots) {
    MaxwellCusp mc;
    mc.x0 = r.value;
    const std::map<std::string, double> at{{"x0", r.value}, {"t", t.get_d()}};
    const double den = cs[1].evaluate(at);
    if (den == 0.0) continue;
    mc.y0 = -cs[0].evaluate(at) / den;
    mc.x = fm.evaluate({mc.x0, mc.y0}, t.get_d());
    mc.multiplicity = r.multiplicity;
    out.push_back(mc);
  }
  return out;
}

}  // namespace burgers::geometry
