#pragma once

// Caustic: pre-caustic det(I + t Hess S0) = 0, the pre-parameterisation
// lambda -> x_t(lambda) obtained from f' = f'' = 0, its cusps and the
// implicit equation C_t = 0 obtained by eliminating x0 from f', f''.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burgers/action/action.hpp"

namespace burgers::geometry {

using action::ReducedAction;
using polyalg::Polynomial;
using polyalg::Rational;
using polyalg::RationalFunction;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Primitive form with pure monomial factors removed and positive leading coefficient.
inline Polynomial strip_monomial_content(const Polynomial& p) {
  if (p.is_zero()) return p;
  const Polynomial m = p.monomial_content();
  const Polynomial q = m.is_constant() ? p : polyalg::exact_divide(p, m);
  return q.primitive();
}

/// Relative size of p(x) against the sum of absolute term magnitudes.
inline double relative_value(const Polynomial& p, const std::map<std::string, double>& at) {
  double scale = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double term = std::fabs(c.get_d());
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
      if (m.exps[i]) term *= std::pow(std::fabs(at.at(p.variable_name(i))), m.exps[i]);
    }
    scale += term;
  }
  const double v = p.evaluate(at);
  return scale > 0 ? std::fabs(v) / scale : std::fabs(v);
}

/// Polynomial in one variable with every other variable fixed to a rational.
inline polyalg::Dense specialise(const Polynomial& p, const std::string& keep,
                                 const std::map<std::string, Rational>& values) {
  Polynomial q = p;
  for (const auto& [name, value] : values) q = q.substitute(name, value);
  if (q.is_zero()) return {};
  if (q.is_constant()) return {q.constant_value()};
  return q.univariate(keep);
}

inline std::vector<double> real_roots_in(const Polynomial& p, const std::string& keep,
                                         const std::map<std::string, Rational>& values) {
  auto d = specialise(p, keep, values);
  polyalg::uv::trim(d);
  if (d.size() < 2) return {};
  return polyalg::real_roots(d);
}

/// p with every factor free of lambda removed, normalised; 1 if nothing depends on lambda.
inline Polynomial lambda_part(const Polynomial& p) {
  if (p.is_zero() || !p.has_variable("lambda")) return Polynomial(1);
  const Polynomial c = polyalg::content_in(p, "lambda");
  return (c.is_constant() ? p : polyalg::exact_divide(p, c)).primitive();
}

struct CausticOptions {
  bool equation = true;  ///< eliminate x0 to obtain C_t (can be expensive for high degree)
};

struct CausticData {
  int dimension = 2;
  Polynomial pre_caustic;                  ///< det(I + t Hess S0) in (x0, y0[, z0], t)
  std::vector<RationalFunction> preparam;  ///< x_t(lambda[, lambda2]) in (lambda, [lambda2,] t)
  Polynomial singular;                     ///< preparam undefined where this vanishes (in lambda, t)
  Polynomial cusp_condition;               ///< d = 2: common factor of the numerators of dx_t/dlambda
  std::optional<Polynomial> equation;      ///< C_t in (x, y[, z], t), primitive
  std::vector<double> translation;         ///< noise translation per unit int_0^t W ds

  /// x_t(lambda) for d = 2, translated by translation * int_w.
  std::vector<double> point(double lambda, double t, double int_w = 0.0) const {
    std::map<std::string, double> at{{"lambda", lambda}, {"t", t}};
    std::vector<double> out;
    for (std::size_t i = 0; i < preparam.size(); ++i) {
      out.push_back(preparam[i].evaluate(at) + (translation.empty() ? 0.0 : translation[i] * int_w));
    }
    return out;
  }

  std::vector<Rational> point_exact(const Rational& lambda, const Rational& t) const {
    std::map<std::string, Rational> at{{"lambda", lambda}, {"t", t}};
    std::vector<Rational> out;
    for (const auto& r : preparam) out.push_back(r.evaluate(at));
    return out;
  }

  std::vector<double> cusp_params(const Rational& t) const { return real_roots_in(cusp_condition, "lambda", {{"t", t}}); }
  std::vector<double> singular_params(const Rational& t) const { return real_roots_in(singular, "lambda", {{"t", t}}); }

  /// C_t with the Eulerian point translated by `shift` (random picture).
  Polynomial translated_equation(const std::vector<Rational>& shift) const {
    if (!equation) throw GeometryError("caustic equation not computed");
    std::map<std::string, Polynomial> sub;
    for (std::size_t i = 0; i < shift.size(); ++i) {
      const auto& n = action::eulerian_names()[i];
      sub[n] = polyalg::var(n) - Polynomial(shift[i]);
    }
    return equation->substitute(sub);
  }
};

/// Eliminates x0 between f' and f'' (resultant), cleaned to a primitive polynomial.
inline Polynomial caustic_equation(const ReducedAction& ra) {
  const Polynomial f1 = ra.tf.derivative("x0");
  const Polynomial f2 = f1.derivative("x0");
  if (f2.degree("x0") < 1) throw GeometryError("f'' is independent of x0; no caustic");
  return strip_monomial_content(polyalg::resultant(f1, f2, "x0"));
}

inline CausticData compute_caustic(const ReducedAction& ra, const CausticOptions& opt = {}) {
  const int d = ra.dimension;
  CausticData cd;
  cd.dimension = d;
  cd.translation = ra.noise.translation;
  {
    action::InitialData id;
    id.dimension = d;
    id.S0 = ra.S0;
    cd.pre_caustic = action::build_flow(id).jacobian_determinant();
  }
  // f' and f'' are affine in x; solve for the unknown Eulerian coordinates.
  const Polynomial f1 = ra.tf.derivative("x0");
  const Polynomial f2 = f1.derivative("x0");
  const auto& en = action::eulerian_names();
  // Unknowns: x and the last coordinate; for d = 3 the middle one is a parameter.
  std::vector<std::string> unknowns{en[0], en[d - 1]};
  auto affine = [&](const Polynomial& e) {
    std::vector<Polynomial> coef;
    Polynomial rest = e;
    for (const auto& u : unknowns) {
      if (e.degree(u) > 1) throw GeometryError("f' is not affine in '" + u + "'");
      const auto cs = e.coefficients(u);
      coef.push_back(cs.size() > 1 ? cs[1] : Polynomial{});
      rest = rest.substitute(u, Rational(0));
    }
    coef.push_back(rest);
    return coef;
  };
  const auto a = affine(f1);
  const auto b = affine(f2);
  const Polynomial det = a[0] * b[1] - a[1] * b[0];
  if (det.is_zero()) throw GeometryError("caustic linear system is singular for every lambda");
  const Polynomial sol0 = a[1] * b[2] - a[2] * b[1];  // times 1/det
  const Polynomial sol1 = a[2] * b[0] - a[0] * b[2];
  auto rename = [&](const Polynomial& p) {
    Polynomial q = p.rename("x0", "lambda");
    if (d == 3) q = q.rename("y", "lambda2");
    return q;
  };
  const Polynomial rdet = rename(det);
  cd.preparam.assign(d, RationalFunction{});
  cd.preparam[0] = RationalFunction(rename(sol0), rdet);
  cd.preparam[d - 1] = RationalFunction(rename(sol1), rdet);
  if (d == 3) cd.preparam[1] = RationalFunction(polyalg::var("lambda2"));
  cd.singular = lambda_part(rdet);
  if (d == 2) {
    Polynomial g;
    for (const auto& comp : cd.preparam) g = polyalg::gcd(g, comp.derivative("lambda").numerator());
    cd.cusp_condition = lambda_part(g);
  }
  if (opt.equation) cd.equation = caustic_equation(ra);
  return cd;
}

}  // namespace burgers::geometry
