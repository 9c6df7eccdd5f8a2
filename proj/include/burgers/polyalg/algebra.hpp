#pragma once

// Division, resultants, discriminants, gcd and related structure operations
// on exact multivariate polynomials.

#include <algorithm>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burgers/polyalg/polynomial.hpp"

namespace burgers::polyalg {

namespace detail {

/// Sorted union of the variable lists of a and b.
inline Polynomial::VarList union_variables(const Polynomial& a, const Polynomial& b) {
  Polynomial::VarList out;
  std::merge(a.variables().begin(), a.variables().end(), b.variables().begin(), b.variables().end(),
             std::back_inserter(out), [](const std::string& x, const std::string& y) { return variable_less(x, y); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Returns q with q*d == p. Throws DivisionError naming the highest variable
/// whose degree is deficient in the first non-divisible remainder term.
inline Polynomial exact_divide(const Polynomial& p, const Polynomial& d) {
  if (d.is_zero()) throw AlgebraError("division by zero polynomial");
  if (p.is_zero()) return {};
  if (d.is_constant()) return p / d.constant_value();

  const auto vars = detail::union_variables(p, d);
  auto embed = [&](const Polynomial& src) {
    std::vector<Polynomial::Term> out;
    out.reserve(src.size());
    for (const auto& [m, c] : src.terms()) {
      Monomial r;
      for (std::size_t i = 0; i < src.variables().size(); ++i) {
        const auto it = std::find(vars.begin(), vars.end(), src.variable_name(i));
        r.exps[static_cast<std::size_t>(it - vars.begin())] = m.exps[i];
      }
      r.degree = m.degree;
      out.emplace_back(r, c);
    }
    return out;
  };
  const auto dt = embed(d);
  std::map<Monomial, Rational, GrlexGreater> rem;
  for (auto& [m, c] : embed(p)) rem.emplace(m, c);
  const Monomial& dlm = dt.front().first;
  const Rational& dlc = dt.front().second;

  std::vector<Polynomial::Term> q;
  Rational factor;
  Rational prod;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!monomial_divides(dlm, top->first)) {
      // Identify the failing variable by name.
      for (std::size_t i = vars.size(); i-- > 0;) {
        if (top->first.exps[i] < dlm.exps[i]) {
          throw DivisionError(vars[i], "exact division failed: remainder not divisible in variable '" + vars[i] + "'");
        }
      }
      throw DivisionError(vars.empty() ? std::string{} : vars.back(), "exact division failed");
    }
    const Monomial qm = monomial_div(top->first, dlm);
    factor = top->second / dlc;
    for (const auto& [m, c] : dt) {
      const Monomial pm = monomial_mul(qm, m);
      mpq_mul(prod.get_mpq_t(), factor.get_mpq_t(), c.get_mpq_t());
      auto [it, inserted] = rem.try_emplace(pm, -prod);
      if (!inserted) {
        it->second -= prod;
        if (it->second == 0) rem.erase(it);
      }
    }
    q.emplace_back(qm, factor);
  }
  return Polynomial::from_terms(vars, std::move(q));
}

/// Exact division that reports failure instead of throwing.
inline std::optional<Polynomial> try_exact_divide(const Polynomial& p, const Polynomial& d) {
  try {
    return exact_divide(p, d);
  } catch (const DivisionError&) {
    return std::nullopt;
  }
}

// ---- determinants -------------------------------------------------------

/// Fraction-free (Bareiss) determinant of a square matrix of polynomials.
inline Polynomial bareiss_determinant(std::vector<std::vector<Polynomial>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial(1);
  for (const auto& row : m) {
    if (row.size() != n) throw AlgebraError("determinant of non-square matrix");
  }
  bool negate = false;
  Polynomial prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // Pivot: the nonzero entry with the fewest terms keeps growth down.
    std::size_t best = n;
    for (std::size_t i = k; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      if (best == n || m[i][k].size() < m[best][k].size()) best = i;
    }
    if (best == n) return {};
    if (best != k) {
      std::swap(m[best], m[k]);
      negate = !negate;
    }
    const Polynomial& pivot = m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Polynomial num = m[i][j] * pivot - m[i][k] * m[k][j];
        m[i][j] = prev.is_constant() ? num / prev.constant_value() : exact_divide(num, prev);
      }
      m[i][k] = Polynomial{};
    }
    prev = pivot;
  }
  Polynomial det = m[n - 1][n - 1];
  return negate ? -det : det;
}

/// Sylvester matrix of p and q in variable v, p's rows above q's.
inline std::vector<std::vector<Polynomial>> sylvester_matrix(const Polynomial& p, const Polynomial& q,
                                                             const std::string& v) {
  const auto pc = p.coefficients(v);
  const auto qc = q.coefficients(v);
  const int m = static_cast<int>(pc.size()) - 1;
  const int n = static_cast<int>(qc.size()) - 1;
  const int size = m + n;
  std::vector<std::vector<Polynomial>> s(size, std::vector<Polynomial>(size));
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) s[r][r + k] = pc[m - k];
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) s[n + r][r + k] = qc[n - k];
  }
  return s;
}

/// Resultant of p and q with respect to v: det of the Sylvester matrix with
/// p's rows above q's. Both must have positive degree in v.
inline Polynomial resultant(const Polynomial& p, const Polynomial& q, const std::string& v) {
  if (p.degree(v) < 1) throw DegreeError("resultant: first argument has degree < 1 in '" + v + "'");
  if (q.degree(v) < 1) throw DegreeError("resultant: second argument has degree < 1 in '" + v + "'");
  return bareiss_determinant(sylvester_matrix(p, q, v));
}

/// Discriminant with the conventional sign: (-1)^{n(n-1)/2} R(p, p') / lc(p).
inline Polynomial discriminant(const Polynomial& p, const std::string& v) {
  const int n = p.degree(v);
  if (n < 2) throw DegreeError("discriminant: degree < 2 in '" + v + "'");
  const Polynomial lc = p.leading_coefficient(v);
  if (lc.is_zero()) throw DegreeError("discriminant: leading coefficient vanishes");
  Polynomial r = exact_divide(resultant(p, p.derivative(v), v), lc);
  return ((n * (n - 1) / 2) % 2 == 1) ? -r : r;
}

// ---- gcd ----------------------------------------------------------------

namespace detail {

using Coeffs = std::vector<Polynomial>;

inline void trim(Coeffs& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

/// Pseudo-remainder of a by b (coefficient vectors in the same variable).
inline Coeffs pseudo_remainder(Coeffs a, const Coeffs& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const Polynomial& lb = b.back();
  while (a.size() >= b.size()) {
    const Polynomial la = a.back();
    const std::size_t shift = a.size() - b.size();
    for (auto& c : a) c = c * lb;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] = a[shift + k] - la * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace detail

inline Polynomial gcd(const Polynomial& p, const Polynomial& q);

/// Gcd of the coefficients of p viewed as a polynomial in v (normalised).
inline Polynomial content_in(const Polynomial& p, const std::string& v) {
  auto cs = p.coefficients(v);
  Polynomial g;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

namespace detail {

inline Polynomial primitive_in(const Polynomial& p, const std::string& v) {
  if (p.is_zero()) return p;
  Polynomial c = content_in(p, v);
  Polynomial r = c.is_constant() ? p : exact_divide(p, c);
  return r.primitive();
}

inline Polynomial gcd_impl(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero()) return q.primitive();
  if (q.is_zero()) return p.primitive();
  if (p.is_constant() || q.is_constant()) return Polynomial(1);
  // Main variable: highest-ranked variable among both.
  std::string v = p.main_variable();
  if (variable_less(v, q.main_variable())) v = q.main_variable();
  if (p.degree(v) == 0) return gcd(p, content_in(q, v));
  if (q.degree(v) == 0) return gcd(content_in(p, v), q);

  const Polynomial cp = content_in(p, v);
  const Polynomial cq = content_in(q, v);
  const Polynomial cg = gcd(cp, cq);
  Polynomial a = cp.is_constant() ? p.primitive() : exact_divide(p, cp);
  Polynomial b = cq.is_constant() ? q.primitive() : exact_divide(q, cq);
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  while (true) {
    auto r = pseudo_remainder(a.coefficients(v), b.coefficients(v));
    if (r.empty()) break;
    Polynomial rp = Polynomial::from_coefficients(v, r);
    if (rp.degree(v) == 0) {
      b = Polynomial(1);
      break;
    }
    a = b;
    b = primitive_in(rp, v);
  }
  Polynomial g = b.is_constant() ? Polynomial(1) : primitive_in(b, v);
  return (cg * g).primitive();
}

}  // namespace detail

/// Greatest common divisor, normalised to content 1 and positive leading
/// coefficient; gcd(p, 0) = normalised p.
inline Polynomial gcd(const Polynomial& p, const Polynomial& q) { return detail::gcd_impl(p, q); }

/// Removes every repeated factor: p / gcd(p, dp/dv_1, ..., dp/dv_k), normalised.
inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_constant()) return p.is_zero() ? p : Polynomial(1);
  Polynomial g = p;
  for (const auto& v : p.variables()) {
    g = gcd(g, p.derivative(v));
    if (g.is_constant()) break;
  }
  return (g.is_constant() ? p : exact_divide(p, g)).primitive();
}

/// Multiplicity with which f divides p (f nonconstant), together with the cofactor.
struct FactorMultiplicity {
  int exponent = 0;
  Polynomial cofactor;
};

inline FactorMultiplicity extract_factor(const Polynomial& p, const Polynomial& f) {
  if (f.is_constant()) throw AlgebraError("extract_factor: constant factor");
  FactorMultiplicity out{0, p};
  while (!out.cofactor.is_zero()) {
    auto q = try_exact_divide(out.cofactor, f);
    if (!q) break;
    out.cofactor = std::move(*q);
    ++out.exponent;
  }
  return out;
}

/// Exact square root if p is a perfect square in Q[vars], choosing the root
/// with positive leading coefficient. Otherwise returns nullopt and, if
/// obstruction is given, stores the residual p - s^2 of the last candidate s.
inline std::optional<Polynomial> exact_sqrt(const Polynomial& p, Polynomial* obstruction = nullptr) {
  if (p.is_zero()) return Polynomial{};
  const auto& [lm, lc] = p.leading_term();
  auto fail = [&](const Polynomial& residual) -> std::optional<Polynomial> {
    if (obstruction) *obstruction = residual;
    return std::nullopt;
  };
  Monomial rm;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (lm.exps[i] % 2 != 0) return fail(p);
    rm.exps[i] = lm.exps[i] / 2;
  }
  rm.degree = lm.degree / 2;
  if (lc < 0 || mpz_perfect_square_p(lc.get_num_mpz_t()) == 0 || mpz_perfect_square_p(lc.get_den_mpz_t()) == 0) {
    return fail(p);
  }
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), lc.get_num_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), lc.get_den_mpz_t());
  Rational rc(rn, rd);
  rc.canonicalize();
  const Polynomial lead = Polynomial::from_terms(p.variables(), {{rm, rc}});
  const Polynomial two_lead = lead.scaled(2);
  Polynomial s = lead;
  // Each step cancels the leading term of p - s^2 with a term strictly below LT(s).
  while (true) {
    Polynomial residual = p - s * s;
    if (residual.is_zero()) return s;
    const Polynomial rlead = Polynomial::from_terms(residual.variables(), {residual.leading_term()});
    auto next = try_exact_divide(rlead, two_lead);
    if (!next) return fail(residual);
    const Polynomial sum = lead + *next;
    if (sum.size() != 2 || Polynomial::from_terms(sum.variables(), {sum.terms()[0]}) != lead) return fail(residual);
    s += *next;
  }
}

}  // namespace burgers::polyalg
