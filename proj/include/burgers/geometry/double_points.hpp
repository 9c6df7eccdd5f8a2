#pragma once

// Complex double points of a real plane curve lambda -> x_t(lambda): points
// a + i eta (eta > 0) where both coordinates are real. Solved as
// Im x(a + i eta) / eta = Im y(a + i eta) / eta = 0 by seeded Newton.

#include <algorithm>
#include <cmath>
#include <complex>

#include "burgers/geometry/caustic.hpp"

namespace burgers::geometry {

struct ComplexDoublePoint {
  double a = 0;
  double eta = 0;
  double t = 0;
  std::string curve_tag = "caustic";
  bool near_window_edge = false;
};

struct DoublePointOptions {
  double a_lo = -5, a_hi = 5;
  double eta_lo = 1e-6, eta_hi = 5;
  int a_seeds = 81;
  int eta_seeds = 30;           ///< log-spaced
  double residual = 1e-10;      ///< on Im x / eta after polishing
  double dedupe = 1e-7;
  double near_real = 1e-8;      ///< pairs with eta below this are not reported
};

namespace detail {

using cld = std::complex<long double>;

struct DenseRational {
  std::vector<long double> num, den;  // ascending

  static cld horner(const std::vector<long double>& c, cld z) {
    cld r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
  }
  static std::vector<long double> diff(const std::vector<long double>& c) {
    std::vector<long double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long double>(i));
    return d;
  }
  /// Value and first derivative at z.
  std::pair<cld, cld> eval(cld z) const {
    const cld n = horner(num, z), d = horner(den, z);
    const cld dn = horner(diff(num), z), dd = horner(diff(den), z);
    return {n / d, (dn * d - n * dd) / (d * d)};
  }
};

inline DenseRational specialise_rational(const RationalFunction& r, const Rational& t) {
  DenseRational out;
  const auto n = specialise(r.numerator(), "lambda", {{"t", t}});
  const auto d = specialise(r.denominator(), "lambda", {{"t", t}});
  for (const auto& c : n) out.num.push_back(polyalg::uv::to_long_double(c));
  for (const auto& c : d) out.den.push_back(polyalg::uv::to_long_double(c));
  if (out.num.empty()) out.num = {0};
  if (out.den.empty()) throw GeometryError("parameterisation denominator vanishes identically at this t");
  return out;
}

}  // namespace detail

/// Complex double points of the caustic parameterisation at time t.
inline std::vector<ComplexDoublePoint> complex_double_points(const CausticData& cd, const Rational& t,
                                                             const DoublePointOptions& opt = {}) {
  if (cd.dimension != 2) throw GeometryError("complex double points implemented for d = 2");
  using detail::cld;
  const auto X = detail::specialise_rational(cd.preparam[0], t);
  const auto Y = detail::specialise_rational(cd.preparam[1], t);
  auto F = [&](long double a, long double e, long double J[2][2]) {
    const cld z(a, e);
    const auto [x, dx] = X.eval(z);
    const auto [y, dy] = Y.eval(z);
    // d/da Im g = Im g', d/deta Im g = Re g'.
    J[0][0] = dx.imag() / e;
    J[0][1] = dx.real() / e - x.imag() / (e * e);
    J[1][0] = dy.imag() / e;
    J[1][1] = dy.real() / e - y.imag() / (e * e);
    return std::pair<long double, long double>{x.imag() / e, y.imag() / e};
  };
  std::vector<ComplexDoublePoint> out;
  const double lg_lo = std::log(std::max(opt.eta_lo, 1e-12)), lg_hi = std::log(opt.eta_hi);
  for (int i = 0; i < opt.a_seeds; ++i) {
    for (int j = 0; j < opt.eta_seeds; ++j) {
      long double a = opt.a_lo + (opt.a_hi - opt.a_lo) * i / std::max(1, opt.a_seeds - 1);
      long double e = std::exp(lg_lo + (lg_hi - lg_lo) * (j + 0.5) / opt.eta_seeds);
      bool ok = false;
      for (int it = 0; it < 80; ++it) {
        long double J[2][2];
        const auto [f, g] = F(a, e, J);
        const long double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (!std::isfinite(static_cast<double>(det)) || det == 0) break;
        long double da = (f * J[1][1] - g * J[0][1]) / det;
        long double de = (J[0][0] * g - J[1][0] * f) / det;
        // Damp steps that would cross eta = 0.
        while (e - de <= 0) de *= 0.5L, da *= 0.5L;
        a -= da;
        e -= de;
        if (std::fabs(static_cast<double>(a)) > 1e3 || e > 1e3) break;
        if (std::fabs(static_cast<double>(da)) + std::fabs(static_cast<double>(de)) < 1e-17L * (1 + std::fabs(a))) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        long double J[2][2];
        const auto [f, g] = F(a, e, J);
        ok = std::fabs(static_cast<double>(f)) + std::fabs(static_cast<double>(g)) < opt.residual;
      }
      if (!ok || e < opt.near_real) continue;
      {
        long double J[2][2];
        const auto [f, g] = F(a, e, J);
        const auto [x, dx] = X.eval(cld(a, e));
        const auto [y, dy] = Y.eval(cld(a, e));
        const double scale = 1 + std::abs(x) + std::abs(y);
        if (std::fabs(static_cast<double>(f)) + std::fabs(static_cast<double>(g)) > opt.residual * scale) continue;
        if (!std::isfinite(scale)) continue;
      }
      if (a < opt.a_lo || a > opt.a_hi || e < opt.eta_lo || e > opt.eta_hi) continue;
      bool dup = false;
      for (const auto& p : out) dup = dup || (std::fabs(p.a - a) + std::fabs(p.eta - e) < opt.dedupe * (1 + std::fabs(p.a)));
      if (dup) continue;
      ComplexDoublePoint p;
      p.a = static_cast<double>(a);
      p.eta = static_cast<double>(e);
      p.t = t.get_d();
      const double ea = 1e-3 * (opt.a_hi - opt.a_lo);
      p.near_window_edge = p.a - opt.a_lo < ea || opt.a_hi - p.a < ea || p.eta > 0.999 * opt.eta_hi || p.eta < 1.001 * opt.eta_lo;
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.a < r.a || (l.a == r.a && l.eta < r.eta); });
  return out;
}

}  // namespace burgers::geometry
