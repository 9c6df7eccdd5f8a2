#pragma once

// Exact sparse multivariate polynomials over Q.
//
// Terms are kept sorted in descending graded-lexicographic order. Variables
// are kept sorted by canonical rank (see variable_rank) and a polynomial only
// ever lists the indeterminates that actually occur in it, so two equal
// polynomials have identical variable lists and term vectors.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace burgers::polyalg {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr std::size_t kMaxVariables = 12;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation needs positive degree in a variable.
class DegreeError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

/// Raised by exact division when the divisor does not divide the dividend.
class DivisionError : public AlgebraError {
 public:
  DivisionError(std::string variable, const std::string& what)
      : AlgebraError(what), variable_(std::move(variable)) {}
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

// Canonical variable order:
//   x0 < y0 < z0 < xc0 < lambda < lambda2 < x < y < z < (others, by name) < t < c
// x0,y0,z0 are the initial-data coordinates, xc0 the second pre-image
// coordinate, lambda the caustic pre-parameter, x,y,z the Eulerian point.
inline int variable_rank(std::string_view name) {
  static const std::array<std::pair<std::string_view, int>, 11> table{{
      {"x0", 0}, {"y0", 1}, {"z0", 2}, {"xc0", 3}, {"lambda", 4},
      {"lambda2", 5}, {"x", 6}, {"y", 7}, {"z", 8}, {"t", 1000}, {"c", 1001},
  }};
  for (const auto& [n, r] : table) {
    if (n == name) return r;
  }
  return 100;
}

inline bool variable_less(std::string_view a, std::string_view b) {
  const int ra = variable_rank(a);
  const int rb = variable_rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

struct Monomial {
  std::array<std::uint16_t, kMaxVariables> exps{};
  std::uint32_t degree = 0;

  bool operator==(const Monomial& o) const { return exps == o.exps; }
  bool is_one() const { return degree == 0; }
};

/// Graded lex, the higher-ranked variable (larger index) being most significant.
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
  if (a.degree != b.degree) return a.degree > b.degree;
  for (std::size_t i = kMaxVariables; i-- > 0;) {
    if (a.exps[i] != b.exps[i]) return a.exps[i] > b.exps[i];
  }
  return false;
}

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto e : m.exps) {
      h ^= e;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    const std::uint32_t e = std::uint32_t{a.exps[i]} + b.exps[i];
    if (e > 0xFFFFu) throw AlgebraError("exponent overflow");
    r.exps[i] = static_cast<std::uint16_t>(e);
  }
  r.degree = a.degree + b.degree;
  return r;
}

inline bool monomial_divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (d.exps[i] > m.exps[i]) return false;
  }
  return true;
}

inline Monomial monomial_div(const Monomial& m, const Monomial& d) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i) r.exps[i] = m.exps[i] - d.exps[i];
  r.degree = m.degree - d.degree;
  return r;
}

/// Canonical rational num/den (mpq_class(num, den) alone is not reduced).
inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Rational -> double without overflow for huge numerators/denominators.
inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact rational value of a finite double.
inline Rational from_double(double v) {
  if (!std::isfinite(v)) throw AlgebraError("non-finite floating coefficient");
  Rational r(v);
  r.canonicalize();
  return r;
}

class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;
  using VarList = std::vector<std::string>;

  Polynomial() : vars_(empty_vars()) {}
  Polynomial(const Rational& c) : vars_(empty_vars()) {  // NOLINT(google-explicit-constructor)
    if (c != 0) {
      terms_.emplace_back(Monomial{}, c);
      terms_.back().second.canonicalize();
    }
  }
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static Polynomial variable(const std::string& name, unsigned power = 1) {
    Polynomial p;
    p.vars_ = std::make_shared<const VarList>(VarList{name});
    Monomial m;
    m.exps[0] = static_cast<std::uint16_t>(power);
    m.degree = power;
    p.terms_.emplace_back(m, Rational(1));
    if (power == 0) p.vars_ = empty_vars();
    return p;
  }

  /// Builds from raw terms over the given variable list (any order, duplicates summed).
  static Polynomial from_terms(VarList vars, std::vector<Term> terms) {
    if (vars.size() > kMaxVariables) throw AlgebraError("too many variables");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        if (vars[i] == vars[j]) throw AlgebraError("duplicate variable '" + vars[i] + "'");
      }
    }
    // Reorder columns into canonical variable order.
    std::vector<std::size_t> perm(vars.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return variable_less(vars[a], vars[b]); });
    VarList sorted;
    for (auto i : perm) sorted.push_back(vars[i]);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    for (auto& [m, c] : terms) {
      Monomial r;
      for (std::size_t k = 0; k < perm.size(); ++k) {
        r.exps[k] = m.exps[perm[k]];
        r.degree += r.exps[k];
      }
      acc[r] += c;
    }
    Polynomial p;
    p.vars_ = std::make_shared<const VarList>(std::move(sorted));
    p.adopt(acc);
    return p;
  }

  const VarList& variables() const { return *vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  Rational constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw AlgebraError("polynomial is not constant");
    return terms_[0].second;
  }
  bool has_variable(std::string_view v) const { return index_of(v) >= 0; }

  int index_of(std::string_view v) const {
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      if ((*vars_)[i] == v) return static_cast<int>(i);
    }
    return -1;
  }

  /// Degree in one variable; -1 for the zero polynomial.
  int degree(std::string_view v) const {
    if (is_zero()) return -1;
    const int i = index_of(v);
    if (i < 0) return 0;
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, m.exps[i]);
    return d;
  }

  int total_degree() const {
    if (is_zero()) return -1;
    return static_cast<int>(terms_.front().first.degree);
  }

  const Term& leading_term() const {
    if (is_zero()) throw AlgebraError("leading term of zero polynomial");
    return terms_.front();
  }
  const Rational& leading_coefficient() const { return leading_term().second; }

  /// The highest-ranked variable present, empty for constants.
  std::string main_variable() const { return vars_->empty() ? std::string{} : vars_->back(); }

  // ---- arithmetic -------------------------------------------------------

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return combine(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return combine(a, b, true); }
  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b); }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Rational& s) const {
    if (s == 0) return {};
    Polynomial r = *this;
    for (auto& t : r.terms_) t.second *= s;
    return r;
  }
  friend Polynomial operator*(const Rational& s, const Polynomial& p) { return p.scaled(s); }
  friend Polynomial operator/(const Polynomial& p, const Rational& s) {
    if (s == 0) throw AlgebraError("division by zero scalar");
    return p.scaled(1 / s);
  }

  Polynomial pow(unsigned e) const {
    Polynomial result(1);
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1u) result = result * base;
      e >>= 1u;
      if (e > 0) base = base * base;
    }
    return result;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return *a.vars_ == *b.vars_ && a.terms_.size() == b.terms_.size() &&
           std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                      [](const Term& x, const Term& y) { return x.first == y.first && x.second == y.second; });
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // ---- calculus and substitution -----------------------------------------

  Polynomial derivative(std::string_view v) const {
    const int i = index_of(v);
    if (i < 0) return {};
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    for (const auto& [m, c] : terms_) {
      if (m.exps[i] == 0) continue;
      Monomial r = m;
      r.exps[i] -= 1;
      r.degree -= 1;
      acc[r] += c * m.exps[i];
    }
    Polynomial p;
    p.vars_ = vars_;
    p.adopt(acc);
    return p;
  }

  Polynomial derivative(std::string_view v, unsigned order) const {
    Polynomial r = *this;
    for (unsigned k = 0; k < order; ++k) r = r.derivative(v);
    return r;
  }

  /// Coefficients with respect to v: result[k] is the coefficient of v^k.
  std::vector<Polynomial> coefficients(std::string_view v) const {
    const int i = index_of(v);
    if (is_zero()) return {};
    if (i < 0) return {*this};
    std::vector<std::unordered_map<Monomial, Rational, MonomialHash>> buckets(degree(v) + 1);
    for (const auto& [m, c] : terms_) {
      Monomial r = m;
      const auto e = r.exps[i];
      r.exps[i] = 0;
      r.degree -= e;
      buckets[e][r] += c;
    }
    std::vector<Polynomial> out(buckets.size());
    for (std::size_t k = 0; k < buckets.size(); ++k) {
      out[k].vars_ = vars_;
      out[k].adopt(buckets[k]);
    }
    return out;
  }

  static Polynomial from_coefficients(const std::string& v, const std::vector<Polynomial>& coeffs) {
    Polynomial r;
    Polynomial vp(1);
    const Polynomial var = variable(v);
    for (const auto& c : coeffs) {
      if (!c.is_zero()) r += c * vp;
      vp = vp * var;
    }
    return r;
  }

  Polynomial leading_coefficient(std::string_view v) const {
    auto cs = coefficients(v);
    if (cs.empty()) return {};
    return cs.back();
  }

  /// Replace variable v by the polynomial value (Horner in v).
  Polynomial substitute(std::string_view v, const Polynomial& value) const {
    if (index_of(v) < 0) return *this;
    auto cs = coefficients(v);
    Polynomial r = cs.back();
    for (std::size_t k = cs.size() - 1; k-- > 0;) r = r * value + cs[k];
    return r;
  }

  Polynomial substitute(const std::map<std::string, Polynomial>& values) const {
    // Simultaneous substitution: rename targets first so values may mention them.
    Polynomial r = *this;
    std::map<std::string, Polynomial> staged;
    for (const auto& [name, val] : values) {
      if (r.index_of(name) < 0) continue;
      const std::string tmp = "~" + name;
      r = r.rename(name, tmp);
      staged.emplace(tmp, val);
    }
    for (const auto& [tmp, val] : staged) r = r.substitute(tmp, val);
    return r;
  }

  Polynomial substitute(std::string_view v, const Rational& value) const { return substitute(v, Polynomial(value)); }

  Polynomial rename(std::string_view from, const std::string& to) const {
    const int i = index_of(from);
    if (i < 0) return *this;
    if (index_of(to) >= 0) throw AlgebraError("rename target '" + to + "' already present");
    VarList vars = *vars_;
    vars[i] = to;
    return from_terms(std::move(vars), terms_);
  }

  /// Exact evaluation at a full assignment of the variables present.
  Rational evaluate(const std::map<std::string, Rational>& at) const {
    return evaluate_generic<Rational>(at);
  }
  double evaluate(const std::map<std::string, double>& at) const { return evaluate_generic<double>(at); }
  std::complex<double> evaluate(const std::map<std::string, std::complex<double>>& at) const {
    return evaluate_generic<std::complex<double>>(at);
  }
  long double evaluate(const std::map<std::string, long double>& at) const {
    return evaluate_generic<long double>(at);
  }

  /// Univariate dense coefficient vector (ascending powers) in v; requires no other variable.
  std::vector<Rational> univariate(std::string_view v) const {
    for (const auto& name : *vars_) {
      if (name != v) throw AlgebraError("polynomial is not univariate in '" + std::string(v) + "' (has '" + name + "')");
    }
    auto cs = coefficients(v);
    std::vector<Rational> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(c.constant_value());
    return out;
  }

  static Polynomial from_univariate(const std::string& v, const std::vector<Rational>& coeffs) {
    std::vector<Term> ts;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0) continue;
      Monomial m;
      m.exps[0] = static_cast<std::uint16_t>(k);
      m.degree = static_cast<std::uint32_t>(k);
      ts.emplace_back(m, coeffs[k]);
    }
    return from_terms({v}, std::move(ts));
  }

  /// Exponent of v in monomial m of this polynomial.
  unsigned exponent(const Monomial& m, std::string_view v) const {
    const int i = index_of(v);
    return i < 0 ? 0u : m.exps[i];
  }

  /// Gcd of the monomials (largest monomial dividing every term).
  Polynomial monomial_content() const {
    if (is_zero()) return {};
    Monomial g = terms_.front().first;
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < kMaxVariables; ++i) g.exps[i] = std::min(g.exps[i], m.exps[i]);
    }
    g.degree = 0;
    for (auto e : g.exps) g.degree += e;
    Polynomial r;
    r.vars_ = vars_;
    r.terms_.emplace_back(g, Rational(1));
    r.compact();
    return r;
  }

  /// Positive rational r such that p / r has coprime integer coefficients.
  Rational content() const {
    if (is_zero()) return Rational(0);
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (const auto& [m, c] : terms_) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational r(num_gcd, den_lcm);
    r.canonicalize();
    return r;
  }

  /// Content 1 with positive leading coefficient.
  Polynomial primitive() const {
    if (is_zero()) return {};
    Rational s = content();
    if (leading_coefficient() < 0) s = -s;
    return scaled(1 / s);
  }

  /// Calls fn(var_index, exponent) for each variable of monomial m with nonzero exponent.
  const std::string& variable_name(std::size_t i) const { return (*vars_)[i]; }

 private:
  static std::shared_ptr<const VarList> empty_vars() {
    static const auto empty = std::make_shared<const VarList>();
    return empty;
  }

  template <class T>
  T evaluate_generic(const std::map<std::string, T>& at) const {
    const std::size_t n = vars_->size();
    std::vector<std::vector<T>> powers(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = at.find((*vars_)[i]);
      if (it == at.end()) throw AlgebraError("no value for variable '" + (*vars_)[i] + "'");
      int maxe = 0;
      for (const auto& [m, c] : terms_) maxe = std::max<int>(maxe, m.exps[i]);
      powers[i].resize(maxe + 1);
      powers[i][0] = T(1);
      for (int e = 1; e <= maxe; ++e) powers[i][e] = powers[i][e - 1] * it->second;
    }
    T sum(0);
    for (const auto& [m, c] : terms_) {
      T term = coefficient_as<T>(c);
      for (std::size_t i = 0; i < n; ++i) {
        if (m.exps[i]) term = term * powers[i][m.exps[i]];
      }
      sum = sum + term;
    }
    return sum;
  }

  template <class T>
  static T coefficient_as(const Rational& c) {
    if constexpr (std::is_same_v<T, Rational>) {
      return c;
    } else if constexpr (std::is_same_v<T, long double>) {
      // Two-step conversion keeps precision for huge numerators/denominators.
      const double hi = c.get_d();
      Rational rest = c - Rational(hi);
      return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
    } else {
      return T(c.get_d());
    }
  }

  void adopt(std::unordered_map<Monomial, Rational, MonomialHash>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [m, c] : acc) {
      if (c != 0) terms_.emplace_back(m, std::move(c));
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_greater(a.first, b.first); });
    compact();
  }

  /// Drop variables that do not occur. Grlex order is preserved because
  /// removed columns are identically zero.
  void compact() {
    const std::size_t n = vars_->size();
    if (n == 0) return;
    std::array<bool, kMaxVariables> used{};
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < n; ++i) used[i] = used[i] || m.exps[i] != 0;
    }
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) kept += used[i];
    if (kept == n) return;
    VarList vars;
    std::array<std::size_t, kMaxVariables> src{};
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) {
        src[vars.size()] = i;
        vars.push_back((*vars_)[i]);
      }
    }
    for (auto& [m, c] : terms_) {
      Monomial r;
      for (std::size_t k = 0; k < vars.size(); ++k) r.exps[k] = m.exps[src[k]];
      r.degree = m.degree;
      m = r;
    }
    vars_ = vars.empty() ? empty_vars() : std::make_shared<const VarList>(std::move(vars));
  }

  /// Union of variable lists plus the column maps of each operand into it.
  static std::shared_ptr<const VarList> unify(const Polynomial& a, const Polynomial& b,
                                              std::array<std::size_t, kMaxVariables>& map_a,
                                              std::array<std::size_t, kMaxVariables>& map_b) {
    if (a.vars_ == b.vars_ || *a.vars_ == *b.vars_) {
      for (std::size_t i = 0; i < kMaxVariables; ++i) map_a[i] = map_b[i] = i;
      return a.vars_;
    }
    VarList merged;
    std::merge(a.vars_->begin(), a.vars_->end(), b.vars_->begin(), b.vars_->end(), std::back_inserter(merged),
               [](const std::string& x, const std::string& y) { return variable_less(x, y); });
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged.size() > kMaxVariables) throw AlgebraError("too many variables");
    auto locate = [&](const std::string& name) {
      return static_cast<std::size_t>(std::find(merged.begin(), merged.end(), name) - merged.begin());
    };
    for (std::size_t i = 0; i < a.vars_->size(); ++i) map_a[i] = locate((*a.vars_)[i]);
    for (std::size_t i = 0; i < b.vars_->size(); ++i) map_b[i] = locate((*b.vars_)[i]);
    return std::make_shared<const VarList>(std::move(merged));
  }

  static Monomial remap(const Monomial& m, std::size_t n, const std::array<std::size_t, kMaxVariables>& map) {
    Monomial r;
    for (std::size_t i = 0; i < n; ++i) r.exps[map[i]] = m.exps[i];
    r.degree = m.degree;
    return r;
  }

  static bool identity_map(std::size_t n, const std::array<std::size_t, kMaxVariables>& map) {
    for (std::size_t i = 0; i < n; ++i) {
      if (map[i] != i) return false;
    }
    return true;
  }

  std::vector<Term> remapped_terms(const std::array<std::size_t, kMaxVariables>& map) const {
    if (identity_map(vars_->size(), map)) return terms_;
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) out.emplace_back(remap(m, vars_->size(), map), c);
    return out;
  }

  static Polynomial combine(const Polynomial& a, const Polynomial& b, bool subtract) {
    std::array<std::size_t, kMaxVariables> ma{}, mb{};
    auto vars = unify(a, b, ma, mb);
    const auto ta = a.remapped_terms(ma);
    const auto tb = b.remapped_terms(mb);
    Polynomial r;
    r.vars_ = vars;
    r.terms_.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
      if (j == tb.size() || (i < ta.size() && grlex_greater(ta[i].first, tb[j].first))) {
        r.terms_.push_back(ta[i++]);
      } else if (i == ta.size() || grlex_greater(tb[j].first, ta[i].first)) {
        r.terms_.emplace_back(tb[j].first, subtract ? Rational(-tb[j].second) : tb[j].second);
        ++j;
      } else {
        Rational c = subtract ? Rational(ta[i].second - tb[j].second) : Rational(ta[i].second + tb[j].second);
        if (c != 0) r.terms_.emplace_back(ta[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    r.compact();
    return r;
  }

  static Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::array<std::size_t, kMaxVariables> ma{}, mb{};
    auto vars = unify(a, b, ma, mb);
    const auto ta = a.remapped_terms(ma);
    const auto tb = b.remapped_terms(mb);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(ta.size() * tb.size() / 2 + 1);
    Rational prod;
    for (const auto& [m1, c1] : ta) {
      for (const auto& [m2, c2] : tb) {
        mpq_mul(prod.get_mpq_t(), c1.get_mpq_t(), c2.get_mpq_t());
        auto [it, inserted] = acc.try_emplace(monomial_mul(m1, m2), prod);
        if (!inserted) it->second += prod;
      }
    }
    Polynomial r;
    r.vars_ = vars;
    r.adopt(acc);
    return r;
  }

  std::shared_ptr<const VarList> vars_;
  std::vector<Term> terms_;
};

inline Polynomial var(const std::string& name) { return Polynomial::variable(name); }

inline Polynomial rational_constant(long num, long den = 1) { return Polynomial(make_rational(num, den)); }

}  // namespace burgers::polyalg
