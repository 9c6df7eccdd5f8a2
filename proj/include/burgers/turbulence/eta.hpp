#pragma once

// Resultant eta process rho(t) = |R_lambda(f''', f'''')| along the caustic.
// Noise moves the caustic by a translation under which f''' and f'''' along
// x_t(lambda) are unchanged, so the process depends on t only. Zeros are
// bracketed on the signed resultant.

#include <cmath>
#include <complex>

#include "burgers/geometry/perestroika.hpp"
#include "burgers/turbulence/zeta.hpp"

namespace burgers::turbulence {

struct EtaSystem {
  polyalg::Polynomial N3, N4;  ///< in (lambda, t), monomial content removed
  polyalg::Polynomial R;       ///< resultant in lambda, a polynomial in t
  bool degenerate = false;     ///< N3 and N4 share a factor for every t
};

inline EtaSystem eta_system(const action::ReducedAction& ra, const geometry::CausticData& cd) {
  EtaSystem s;
  s.N3 = geometry::strip_monomial_content(geometry::derivative_on_caustic(ra, cd, 3));
  s.N4 = geometry::strip_monomial_content(geometry::derivative_on_caustic(ra, cd, 4));
  const auto g = polyalg::gcd(s.N3, s.N4);
  s.degenerate = g.has_variable("lambda");
  if (s.N3.degree("lambda") > 0 && s.N4.degree("lambda") > 0) s.R = polyalg::resultant(s.N3, s.N4, "lambda");
  return s;
}

/// Signed resultant in lambda at a fixed rational time.
inline polyalg::Rational eta_resultant(const EtaSystem& s, const polyalg::Rational& t) {
  const auto p = s.N3.substitute("t", t);
  const auto q = s.N4.substitute("t", t);
  const int dp = p.degree("lambda"), dq = q.degree("lambda");
  if (p.is_zero() || q.is_zero()) return 0;
  if (dp == 0 && dq == 0) return 1;
  if (dq == 0) return polyalg::Polynomial(q).pow(dp).constant_value();
  if (dp == 0) return polyalg::Polynomial(p).pow(dq).constant_value();
  // Specialisation commutes with the resultant when no leading coefficient drops.
  if (dp == s.N3.degree("lambda") && dq == s.N4.degree("lambda")) return s.R.substitute("t", t).constant_value();
  return polyalg::resultant(p, q, "lambda").constant_value();
}

struct EtaResult {
  SampledProcess process;        ///< |R|
  std::vector<double> signed_value;
  ZeroCrossingRecord record;
};

/// Evaluated at the scenario grid times (t > 0); eps only recorded.
inline EtaResult eta_process(const action::ReducedAction& ra, const geometry::CausticData& cd,
                             const BrownianScenario& scn, double eps) {
  const auto sys = eta_system(ra, cd);
  if (sys.degenerate) throw TurbulenceError("f''' and f'''' share a factor along the whole caustic");
  EtaResult out;
  for (std::size_t k = 1; k <= scn.steps(); ++k) {
    const double t = scn.time(k);
    const double r = eta_resultant(sys, polyalg::from_double(t)).get_d();
    out.process.t.push_back(t);
    out.process.value.push_back(std::fabs(r));
    out.signed_value.push_back(r);
  }
  SampledProcess signed_proc{out.process.t, out.signed_value, {}};
  out.record = make_record("eta", signed_proc, 0.0);
  out.record.epsilon = eps;
  out.record.seed = scn.seed;
  out.record.path = scn.path;
  return out;
}

// ---- factorised form ---------------------------------------------------------

struct EtaFactorised {
  double direct = 0;      ///< |R(P, P')| computed exactly
  double factorised = 0;  ///< from the roots of P
  double relative_error = 0;
  int real_roots = 0, complex_pairs = 0;
};

/// |R(P,P')| = |lc|^(2N-1) 4^q prod eta_k^2 prod_{j!=k}{...} |R(H,H')| |R(Q,H)|^2 for P = N3 at time t.
inline EtaFactorised eta_factorised(const EtaSystem& s, const polyalg::Rational& t) {
  using polyalg::Rational;
  const auto p = s.N3.substitute("t", t);
  if (p.degree("lambda") < 2) throw TurbulenceError("f''' along the caustic has degree < 2 in lambda");
  EtaFactorised out;
  out.direct = std::fabs(polyalg::resultant(p, p.derivative("lambda"), "lambda").constant_value().get_d());
  const auto dense = p.univariate("lambda");
  const int N = static_cast<int>(dense.size()) - 1;
  const auto rs = polyalg::roots(dense);
  std::vector<long double> r;
  for (const auto& x : rs.real_roots) {
    for (int m = 0; m < x.multiplicity; ++m) r.push_back(x.value);
  }
  std::vector<std::pair<long double, long double>> z;
  for (const auto& c : rs.complex_pairs) {
    for (int m = 0; m < c.multiplicity; ++m) z.emplace_back(c.a, c.eta);
  }
  out.real_roots = static_cast<int>(r.size());
  out.complex_pairs = static_cast<int>(z.size());
  // Work in logs to avoid overflow.
  long double lg = (2.0L * N - 1) * std::log(std::fabs(polyalg::uv::to_long_double(dense.back())));
  lg += z.size() * std::log(4.0L);
  for (const auto& [a, e] : z) lg += 2 * std::log(e);
  for (std::size_t j = 0; j < z.size(); ++j) {
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (j == k) continue;
      const long double da = z[k].first - z[j].first;
      const long double ek = z[k].second, ej = z[j].second;
      lg += std::log(da * da * da * da + 2 * (ek * ek + ej * ej) * da * da + (ek * ek - ej * ej) * (ek * ek - ej * ej));
    }
  }
  for (std::size_t i = 0; i < r.size(); ++i) {  // |R(H, H')| for monic H
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (i != j) lg += std::log(std::fabs(r[i] - r[j]));
    }
  }
  for (long double x : r) {  // |R(Q, H)|^2
    for (const auto& [a, e] : z) lg += 2 * std::log((x - a) * (x - a) + e * e);
  }
  out.factorised = static_cast<double>(std::exp(lg));
  out.relative_error = std::fabs(out.factorised - out.direct) / out.direct;
  return out;
}

}  // namespace burgers::turbulence
