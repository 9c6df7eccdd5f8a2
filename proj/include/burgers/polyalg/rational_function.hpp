#pragma once

// Quotients of polynomials, kept in lowest terms with a primitive denominator
// whose leading coefficient is positive.

#include <complex>
#include <map>
#include <string>

#include "burgers/polyalg/algebra.hpp"

namespace burgers::polyalg {

class RationalFunction {
 public:
  RationalFunction() : num_(), den_(1) {}
  RationalFunction(const Polynomial& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& c) : num_(c), den_(1) {}    // NOLINT(google-explicit-constructor)
  RationalFunction(long c) : num_(c), den_(1) {}               // NOLINT(google-explicit-constructor)
  RationalFunction(const Polynomial& n, const Polynomial& d) : num_(n), den_(d) {
    if (d.is_zero()) throw AlgebraError("rational function with zero denominator");
    normalise();
  }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_zero() const { return num_.is_zero(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return {a.num_ - b.num_, a.den_};
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  RationalFunction operator-() const { return {-num_, den_}; }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.num_.is_zero()) throw AlgebraError("division by zero rational function");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction derivative(const std::string& v) const {
    return {num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_};
  }

  /// Replace v by a rational function value.
  RationalFunction substitute(const std::string& v, const RationalFunction& value) const {
    return substitute_poly(num_, v, value) / substitute_poly(den_, v, value);
  }

  template <class T>
  T evaluate(const std::map<std::string, T>& at) const {
    const T d = den_.evaluate(at);
    if (d == T(0)) throw AlgebraError("rational function pole");
    return num_.evaluate(at) / d;
  }
  Rational evaluate(const std::map<std::string, Rational>& at) const {
    const Rational d = den_.evaluate(at);
    if (d == 0) throw AlgebraError("rational function pole");
    return num_.evaluate(at) / d;
  }

 private:
  static RationalFunction substitute_poly(const Polynomial& p, const std::string& v, const RationalFunction& value) {
    if (!p.has_variable(v)) return p;
    // Horner over coefficients in v.
    auto cs = p.coefficients(v);
    RationalFunction acc(cs.back());
    for (std::size_t k = cs.size() - 1; k-- > 0;) acc = acc * value + RationalFunction(cs[k]);
    return acc;
  }

  void normalise() {
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    if (!den_.is_constant()) {
      const Polynomial g = gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = exact_divide(num_, g);
        den_ = exact_divide(den_, g);
      }
    }
    Rational s = den_.content();
    if (den_.leading_coefficient() < 0) s = -s;
    num_ = num_ / s;
    den_ = den_ / s;
  }

  Polynomial num_;
  Polynomial den_;
};

}  // namespace burgers::polyalg
