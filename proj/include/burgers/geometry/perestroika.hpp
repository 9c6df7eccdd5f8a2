#pragma once

// Swallowtail perestroika: f' = f'' = f''' = f'''' = 0. Along the caustic the
// first two hold identically, so we need common roots in lambda of N3, N4
// (numerators of f''' and f'''' on x_t(lambda)). Eliminating lambda gives a
// polynomial in t; each positive root is polished by Newton in (lambda, t).

#include <algorithm>
#include <array>
#include <cmath>

#include "burgers/geometry/caustic.hpp"

namespace burgers::geometry {

struct PerestroikaSystem {
  Polynomial N3;  ///< numerator of f''' along the caustic, monomial content removed, in (lambda, t)
  Polynomial N4;
  Polynomial R;   ///< resultant in lambda of N3 and N4, a polynomial in t
};

/// d-th x0-derivative of t*f along the caustic, as a polynomial numerator in (lambda, t).
inline Polynomial derivative_on_caustic(const ReducedAction& ra, const CausticData& cd, int order) {
  Polynomial d = ra.tf;
  for (int k = 0; k < order; ++k) d = d.derivative("x0");
  RationalFunction r(d.rename("x0", "lambda"));
  r = r.substitute("x", cd.preparam[0]);
  r = r.substitute("y", cd.preparam[1]);
  return r.numerator();
}

/// Resultant in lambda, allowing one argument to be free of lambda.
inline Polynomial resultant_lambda(const Polynomial& p, const Polynomial& q) {
  const int dp = p.degree("lambda");
  const int dq = q.degree("lambda");
  if (dp == 0 && dq == 0) return Polynomial(1);
  if (dq == 0) return q.pow(dp);
  if (dp == 0) return p.pow(dq);
  return polyalg::resultant(p, q, "lambda");
}

inline PerestroikaSystem perestroika_system(const ReducedAction& ra, const CausticData& cd) {
  if (cd.dimension != 2) throw GeometryError("perestroika detection implemented for d = 2");
  if (ra.degree() < 4) throw GeometryError("f has degree < 4 in x0; f'''' is constant");
  PerestroikaSystem s;
  s.N3 = strip_monomial_content(derivative_on_caustic(ra, cd, 3));
  s.N4 = strip_monomial_content(derivative_on_caustic(ra, cd, 4));
  s.R = strip_monomial_content(resultant_lambda(s.N3, s.N4));
  return s;
}

struct PerestroikaEvent {
  double t = 0;
  double lambda = 0;
  std::vector<double> x;
  double residual = 0;     ///< max |N3|, |N4| (relative) after polishing
  bool certificate = false;  ///< gradients of f', f'', f''', f'''' in (x, y, x0, t) independent
  double certificate_det = 0;
  double dx_dlambda = 0;   ///< max abs component of dx_t/dlambda at the event
  double d2x_dlambda2 = 0;
};

namespace detail {

inline double eval_lt(const Polynomial& p, double lambda, double t) {
  return p.evaluate(std::map<std::string, double>{{"lambda", lambda}, {"t", t}});
}

/// Newton on (N3, N4) = 0 in (lambda, t) with analytic partials.
inline bool polish(const PerestroikaSystem& s, double& lambda, double& t) {
  const Polynomial a_l = s.N3.derivative("lambda"), a_t = s.N3.derivative("t");
  const Polynomial b_l = s.N4.derivative("lambda"), b_t = s.N4.derivative("t");
  for (int it = 0; it < 100; ++it) {
    const double f = eval_lt(s.N3, lambda, t), g = eval_lt(s.N4, lambda, t);
    const double j11 = eval_lt(a_l, lambda, t), j12 = eval_lt(a_t, lambda, t);
    const double j21 = eval_lt(b_l, lambda, t), j22 = eval_lt(b_t, lambda, t);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0 || !std::isfinite(det)) return false;
    const double dl = (f * j22 - g * j12) / det;
    const double dt = (j11 * g - j21 * f) / det;
    lambda -= dl;
    t -= dt;
    if (std::fabs(dl) < 1e-16 * std::max(1.0, std::fabs(lambda)) && std::fabs(dt) < 1e-16 * std::max(1.0, t)) break;
  }
  return std::isfinite(lambda) && std::isfinite(t);
}

inline double det4(std::array<std::array<double, 4>, 4> m) {
  double det = 1;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r) if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return 0;
    if (piv != c) { std::swap(m[piv], m[c]); det = -det; }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double k = m[r][c] / m[c][c];
      for (int j = c; j < 4; ++j) m[r][j] -= k * m[c][j];
    }
  }
  return det;
}

}  // namespace detail

/// Perestroika events with t in (t_lo, t_hi].
inline std::vector<PerestroikaEvent> perestroika_detect(const ReducedAction& ra, const CausticData& cd, double t_lo,
                                                        double t_hi) {
  const auto sys = perestroika_system(ra, cd);
  std::vector<PerestroikaEvent> out;
  if (sys.R.is_constant() || !sys.R.has_variable("t")) return out;
  const auto fp = ra.tf.derivative("x0");
  std::vector<Polynomial> eqs{fp};
  for (int k = 0; k < 3; ++k) eqs.push_back(eqs.back().derivative("x0"));
  for (double t : polyalg::real_roots(sys.R.univariate("t"))) {
    if (t <= t_lo || t > t_hi) continue;
    // Seed lambda among real roots of N3 and of dN3/dlambda (a near-double root may be complex).
    const Rational tq = polyalg::from_double(t);
    auto cand = real_roots_in(sys.N3, "lambda", {{"t", tq}});
    for (double l : real_roots_in(sys.N3.derivative("lambda"), "lambda", {{"t", tq}})) cand.push_back(l);
    if (cand.empty()) continue;
    double lambda = cand.front();
    auto miss = [&](double l) {
      return std::fabs(detail::eval_lt(sys.N3, l, t)) + std::fabs(detail::eval_lt(sys.N4, l, t));
    };
    double best = miss(lambda);
    for (double l : cand) {
      const double v = miss(l);
      if (v < best) best = v, lambda = l;
    }
    double tt = t;
    if (!detail::polish(sys, lambda, tt)) continue;
    PerestroikaEvent ev;
    ev.t = tt;
    ev.lambda = lambda;
    ev.x = cd.point(lambda, tt);
    const std::map<std::string, double> at{{"lambda", lambda}, {"t", tt}};
    ev.residual = std::max(relative_value(sys.N3, at), relative_value(sys.N4, at));
    if (ev.residual > 1e-8) continue;
    const std::map<std::string, double> full{{"x0", lambda}, {"x", ev.x[0]}, {"y", ev.x[1]}, {"t", tt}};
    std::array<std::array<double, 4>, 4> J{};
    const std::array<const char*, 4> vars{"x", "y", "x0", "t"};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) J[i][j] = eqs[i].derivative(vars[j]).evaluate(full);
    }
    ev.certificate_det = detail::det4(J);
    double scale = 1;
    for (const auto& row : J) {
      double n = 0;
      for (double v : row) n += v * v;
      scale *= std::sqrt(n);
    }
    ev.certificate = scale > 0 && std::fabs(ev.certificate_det) > 1e-10 * scale;
    for (const auto& comp : cd.preparam) {
      const auto d1 = comp.derivative("lambda");
      const auto d2 = d1.derivative("lambda");
      ev.dx_dlambda = std::max(ev.dx_dlambda, std::fabs(d1.evaluate(at)));
      ev.d2x_dlambda2 = std::max(ev.d2x_dlambda2, std::fabs(d2.evaluate(at)));
    }
    out.push_back(ev);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

}  // namespace burgers::geometry
