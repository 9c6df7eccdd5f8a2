#pragma once

// Univariate root finding: exact real-root isolation (Descartes rule with
// bisection on the square-free factors) and complex conjugate pairs by
// Aberth-Ehrlich simultaneous iteration in long double.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "burgers/polyalg/polynomial.hpp"

namespace burgers::polyalg {

/// Dense univariate polynomial, ascending powers, exact coefficients.
using Dense = std::vector<Rational>;

namespace uv {

inline void trim(Dense& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Dense& p) { return static_cast<int>(p.size()) - 1; }

inline Dense derivative(const Dense& p) {
  Dense r;
  for (std::size_t k = 1; k < p.size(); ++k) r.push_back(p[k] * static_cast<long>(k));
  trim(r);
  return r;
}

inline Rational evaluate(const Dense& p, const Rational& x) {
  Rational acc = 0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

inline int sign_at(const Dense& p, const Rational& x) { return sgn(evaluate(p, x)); }

/// Quotient and remainder; b nonzero.
inline std::pair<Dense, Dense> divmod(Dense a, const Dense& b) {
  trim(a);
  if (b.empty()) throw AlgebraError("univariate division by zero");
  if (a.size() < b.size()) return {Dense{}, a};
  Dense q(a.size() - b.size() + 1);
  const Rational& lb = b.back();
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rational f = a.back() / lb;
    q[shift] = f;
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline Dense monic(Dense p) {
  trim(p);
  if (p.empty()) return p;
  const Rational lc = p.back();
  for (auto& c : p) c /= lc;
  return p;
}

inline Dense gcd(Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// Yun's square-free decomposition: p = lc * prod factors[i]^(i+1), factors monic.
inline std::vector<Dense> squarefree_decomposition(const Dense& p) {
  std::vector<Dense> out;
  Dense a = monic(p);
  if (degree(a) < 1) return out;
  Dense b = derivative(a);
  Dense c = gcd(a, b);
  Dense w = divmod(a, c).first;
  Dense y = divmod(b, c).first;
  while (true) {
    Dense dw = derivative(w);
    Dense z = y;
    for (std::size_t k = 0; k < dw.size(); ++k) {
      if (k < z.size()) z[k] -= dw[k];
      else z.push_back(-dw[k]);
    }
    trim(z);
    Dense g = z.empty() ? monic(w) : gcd(w, z);
    out.push_back(g);
    w = divmod(w, g).first;
    if (degree(w) < 1) break;
    y = divmod(z, g).first;
  }
  // Drop trailing trivial factors but keep positions for multiplicity.
  while (!out.empty() && degree(out.back()) < 1) out.pop_back();
  return out;
}

/// p(x + s)
inline Dense taylor_shift(Dense p, const Rational& s) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = n - 1; k-- > i;) p[k] += s * p[k + 1];
  }
  return p;
}

/// p(a + (b - a) y)
inline Dense affine_map(const Dense& p, const Rational& a, const Rational& b) {
  Dense q = taylor_shift(p, a);
  Rational scale = 1;
  const Rational w = b - a;
  for (auto& c : q) {
    c *= scale;
    scale *= w;
  }
  return q;
}

inline int sign_variations(const Dense& p) {
  int count = 0;
  int last = 0;
  for (const auto& c : p) {
    const int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Descartes bound on the number of roots in the open interval (a, b).
inline int descartes_count(const Dense& p, const Rational& a, const Rational& b) {
  Dense q = affine_map(p, a, b);
  std::reverse(q.begin(), q.end());  // (1+y)^n p(1/(1+y)) after the shift below
  q = taylor_shift(q, 1);
  return sign_variations(q);
}

/// Power of two strictly above the Cauchy bound.
inline Rational root_bound(const Dense& p) {
  Rational m = 0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    Rational r = abs(p[k] / p.back());
    if (r > m) m = r;
  }
  Rational b = 1;
  while (b <= m + 1) b *= 2;
  return b;
}

inline long double to_long_double(const Rational& c) {
  const double hi = c.get_d();
  if (!std::isfinite(hi)) return static_cast<long double>(hi);
  const Rational rest = c - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

}  // namespace uv

struct RealRoot {
  Rational lo;   ///< isolating interval [lo, hi]; lo == hi for an exact rational root
  Rational hi;
  double value;  ///< midpoint
  int multiplicity;
};

struct ComplexPair {
  double a;
  double eta;  ///< > 0
  int multiplicity;
  bool near_real;
};

struct RootSet {
  std::vector<RealRoot> real_roots;
  std::vector<ComplexPair> complex_pairs;
  int degree = 0;
  double achieved_width = 0.0;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& r : real_roots) s += r.multiplicity;
    for (const auto& c : complex_pairs) s += 2 * c.multiplicity;
    return s;
  }
  /// Real roots counted once each, plus near-real pairs if requested.
  std::vector<double> real_values() const {
    std::vector<double> v;
    for (const auto& r : real_roots) v.push_back(r.value);
    return v;
  }
};

struct RootOptions {
  double width = 1e-12;
  double near_real = 1e-8;
  bool complex_pairs = true;
};

namespace detail {

/// Isolating intervals of the real roots of a square-free polynomial.
inline void isolate(const Dense& p, const Rational& a, const Rational& b, std::vector<std::pair<Rational, Rational>>& out,
                    int depth = 0) {
  const int v = uv::descartes_count(p, a, b);
  if (v == 0) return;
  if (v == 1) {
    out.emplace_back(a, b);
    return;
  }
  if (depth > 400) throw AlgebraError("root isolation did not terminate");
  // Split at a non-root so that every root lies strictly inside a subinterval.
  Rational m = (a + b) / 2;
  for (int k = 3; uv::sign_at(p, m) == 0; ++k) m = a + (b - a) * make_rational(k - 1, 2 * k);
  isolate(p, a, m, out, depth + 1);
  isolate(p, m, b, out, depth + 1);
}

/// Bisect a sign-change bracket down to the requested width.
inline void refine(const Dense& p, Rational& lo, Rational& hi, const Rational& width) {
  if (lo == hi) return;
  int slo = uv::sign_at(p, lo);
  if (slo == 0) {
    hi = lo;
    return;
  }
  if (uv::sign_at(p, hi) == 0) {
    lo = hi;
    return;
  }
  while (hi - lo > width) {
    Rational m = (lo + hi) / 2;
    const int sm = uv::sign_at(p, m);
    if (sm == 0) {
      lo = hi = m;
      return;
    }
    if (sm == slo) lo = m;
    else hi = m;
  }
}

using cld = std::complex<long double>;

inline cld horner(const std::vector<long double>& c, cld z) {
  cld acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

/// All complex roots of a square-free polynomial (Aberth-Ehrlich).
inline std::vector<cld> aberth(const Dense& p) {
  const int n = uv::degree(p);
  std::vector<cld> z(n);
  if (n < 1) return z;
  std::vector<long double> c(p.size()), dc(p.size() - 1);
  for (std::size_t k = 0; k < p.size(); ++k) c[k] = uv::to_long_double(p[k] / p.back());
  for (std::size_t k = 1; k < c.size(); ++k) dc[k - 1] = c[k] * static_cast<long double>(k);
  long double radius = 0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::pow(std::fabs(c[k]), 1.0L / (n - k)));
  radius = std::max(radius, 1e-3L);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2 * pi * k / n + 0.4L);
  for (int iter = 0; iter < 2000; ++iter) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      const cld pv = horner(c, z[k]);
      const cld dv = horner(dc, z[k]);
      if (pv == cld(0)) continue;
      const cld ratio = pv / dv;
      cld sum = 0;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      }
      const cld step = ratio / (1.0L - ratio * sum);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0L, std::abs(z[k])));
    }
    if (worst < 1e-17L) break;
  }
  // Newton polish.
  for (auto& r : z) {
    for (int it = 0; it < 4; ++it) {
      const cld dv = horner(dc, r);
      if (dv == cld(0)) break;
      r -= horner(c, r) / dv;
    }
  }
  return z;
}

}  // namespace detail

/// Roots of a univariate dense polynomial.
inline RootSet roots(const Dense& coeffs, const RootOptions& opt = {}) {
  Dense p = coeffs;
  uv::trim(p);
  if (p.empty()) throw AlgebraError("roots of the zero polynomial");
  if (!(opt.width > 0)) throw AlgebraError("root width must be positive");
  RootSet out;
  out.degree = uv::degree(p);
  const auto factors = uv::squarefree_decomposition(p);
  const Rational width = from_double(opt.width);
  double achieved = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Dense& f = factors[i];
    if (uv::degree(f) < 1) continue;
    const int mult = static_cast<int>(i) + 1;
    const Rational bound = uv::root_bound(f);
    std::vector<std::pair<Rational, Rational>> iv;
    detail::isolate(f, -bound, bound, iv);
    for (auto& [lo, hi] : iv) {
      detail::refine(f, lo, hi, width);
      const double mid = Rational((lo + hi) / 2).get_d();
      if (lo != hi && opt.width < std::fabs(mid) * std::ldexp(1.0, -52)) {
        throw AlgebraError("requested width " + std::to_string(opt.width) + " below achievable precision; achieved " +
                           std::to_string(std::fabs(mid) * std::ldexp(1.0, -52)));
      }
      achieved = std::max(achieved, Rational(hi - lo).get_d());
      out.real_roots.push_back({lo, hi, mid, mult});
    }
    const int ncomplex = uv::degree(f) - static_cast<int>(iv.size());
    if (ncomplex > 0 && opt.complex_pairs) {
      auto z = detail::aberth(f);
      // The ncomplex roots furthest from the real axis are the non-real ones.
      std::sort(z.begin(), z.end(), [](const auto& a, const auto& b) { return std::fabs(a.imag()) > std::fabs(b.imag()); });
      std::vector<detail::cld> upper;
      for (int k = 0; k < ncomplex; ++k) upper.push_back(z[k]);
      // Keep one representative per conjugate pair.
      std::sort(upper.begin(), upper.end(), [](const auto& a, const auto& b) {
        if (std::fabs(a.real() - b.real()) > 1e-300L) return a.real() < b.real();
        return a.imag() > b.imag();
      });
      std::vector<bool> used(upper.size(), false);
      for (std::size_t k = 0; k < upper.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        std::size_t best = upper.size();
        long double dist = std::numeric_limits<long double>::infinity();
        for (std::size_t j = 0; j < upper.size(); ++j) {
          if (used[j]) continue;
          const long double d = std::abs(upper[j] - std::conj(upper[k]));
          if (d < dist) {
            dist = d;
            best = j;
          }
        }
        if (best < upper.size()) used[best] = true;
        const double a = static_cast<double>(upper[k].real());
        const double eta = static_cast<double>(std::fabs(upper[k].imag()));
        out.complex_pairs.push_back({a, eta, mult, eta < opt.near_real});
      }
    }
  }
  std::sort(out.real_roots.begin(), out.real_roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.lo < b.lo; });
  std::sort(out.complex_pairs.begin(), out.complex_pairs.end(),
            [](const ComplexPair& a, const ComplexPair& b) { return a.a < b.a || (a.a == b.a && a.eta < b.eta); });
  out.achieved_width = achieved;
  return out;
}

/// Roots of a univariate polynomial (the only variable present, if any).
inline RootSet roots(const Polynomial& p, const RootOptions& opt = {}) {
  if (p.is_zero()) throw AlgebraError("roots of the zero polynomial");
  if (p.variables().size() > 1) throw AlgebraError("roots: polynomial is not univariate");
  if (p.is_constant()) return RootSet{};
  return roots(p.univariate(p.variables().front()), opt);
}

/// Roots of a polynomial with floating coefficients (ascending), converted exactly.
inline RootSet roots(const std::vector<double>& coeffs, const RootOptions& opt = {}) {
  Dense d;
  for (double c : coeffs) d.push_back(from_double(c));
  return roots(d, opt);
}

/// Distinct real roots only (no complex search), as doubles.
inline std::vector<double> real_roots(const Dense& p, double width = 1e-12) {
  RootOptions opt;
  opt.width = width;
  opt.complex_pairs = false;
  return roots(p, opt).real_values();
}

inline std::vector<double> real_roots(const std::vector<double>& coeffs, double width = 1e-12) {
  Dense d;
  for (double c : coeffs) d.push_back(from_double(c));
  return real_roots(d, width);
}

}  // namespace burgers::polyalg
