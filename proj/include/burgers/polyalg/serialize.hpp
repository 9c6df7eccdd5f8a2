#pragma once

// Canonical text form and JSON form of polynomials.
//
// Text: terms in descending grlex order, `c * v1^e1 v2^e2`, coefficients as
// exact integers or p/q, unit coefficients and unit exponents omitted.
// The parser also accepts general expressions with + - * / ^, parentheses,
// decimals and implicit multiplication (juxtaposition).

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "burgers/polyalg/polynomial.hpp"

namespace burgers::polyalg {

class ParseError : public AlgebraError {
 public:
  ParseError(std::size_t column, const std::string& what)
      : AlgebraError("column " + std::to_string(column) + ": " + what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

inline std::string to_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
      if (m.exps[i] == 0) continue;
      if (!mono.empty()) mono += ' ';
      mono += p.variable_name(i);
      if (m.exps[i] > 1) mono += "^" + std::to_string(m.exps[i]);
    }
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + " * " + mono;
    }
  }
  return out;
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_ + 1, what); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char ch) {
    skip();
    return pos_ < s_.size() && s_[pos_] == ch;
  }

  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char ch = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '(' || ch == '.';
  }

  Polynomial expression() {
    Polynomial acc;
    bool negate = false;
    if (peek('-')) {
      ++pos_;
      negate = true;
    } else if (peek('+')) {
      ++pos_;
    }
    acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = power();
    while (true) {
      if (peek('*')) {
        ++pos_;
        acc *= power();
      } else if (peek('/')) {
        ++pos_;
        const std::size_t at = pos_;
        Polynomial d = power();
        if (!d.is_constant()) {
          pos_ = at;
          fail("division by a non-constant");
        }
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc / d.constant_value();
      } else if (starts_primary()) {
        acc *= power();
      } else {
        return acc;
      }
    }
  }

  Polynomial power() {
    Polynomial base = unary();
    if (peek('^')) {
      ++pos_;
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      const unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (e > 60000) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    return primary();
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Polynomial inner = expression();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return Polynomial::variable(std::string(s_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  Polynomial number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      const std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      frac = std::string(s_.substr(fs, pos_ - fs));
    }
    if (digits.empty() && frac.empty()) fail("malformed number");
    Integer num(digits.empty() ? "0" : digits + frac);
    Integer den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return Polynomial(q);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text) { return detail::Parser(text).parse(); }

inline nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json j;
  j["variables"] = p.variables();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    nlohmann::json t;
    std::vector<unsigned> exps;
    for (std::size_t i = 0; i < p.variables().size(); ++i) exps.push_back(m.exps[i]);
    t["exps"] = exps;
    t["num"] = c.get_num().get_str();
    t["den"] = c.get_den().get_str();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline Polynomial polynomial_from_json(const nlohmann::json& j) {
  const auto vars = j.at("variables").get<std::vector<std::string>>();
  std::vector<Polynomial::Term> terms;
  for (const auto& t : j.at("terms")) {
    const auto exps = t.at("exps").get<std::vector<unsigned>>();
    if (exps.size() != vars.size()) throw AlgebraError("json term exponent length mismatch");
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] > 0xFFFFu) throw AlgebraError("json exponent too large");
      m.exps[i] = static_cast<std::uint16_t>(exps[i]);
      m.degree += exps[i];
    }
    Rational c(Integer(t.at("num").get<std::string>()), Integer(t.at("den").get<std::string>()));
    if (c.get_den() == 0) throw AlgebraError("json zero denominator");
    c.canonicalize();
    terms.emplace_back(m, c);
  }
  return Polynomial::from_terms(vars, std::move(terms));
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_text(p); }

}  // namespace burgers::polyalg
