#include <gtest/gtest.h>

#include <random>

#include "burgers/polyalg.hpp"

using namespace burgers::polyalg;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }

Polynomial random_univariate(std::mt19937_64& rng, const std::string& v, int degree, bool monic = false) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::vector<Rational> c(degree + 1);
  for (auto& x : c) x = coef(rng);
  if (monic) c.back() = 1;
  while (c.back() == 0) c.back() = coef(rng);
  return Polynomial::from_univariate(v, c);
}

Polynomial random_bivariate(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> coef(-4, 4);
  Polynomial p;
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) {
      const int c = coef(rng);
      if (c) p += Polynomial(c) * var("x").pow(i) * var("y").pow(j);
    }
  }
  return p;
}

}  // namespace

TEST(Polynomial, CanonicalEqualityIgnoresConstructionOrder) {
  EXPECT_EQ(P("y*x + 1"), P("1 + x y"));
  EXPECT_EQ(P("(x+y)^2"), P("x^2 + 2 x y + y^2"));
  EXPECT_TRUE(P("x - x").is_zero());
  EXPECT_TRUE(P("x - x").variables().empty());
}

TEST(Polynomial, DerivativeAndSubstitution) {
  EXPECT_EQ(P("x^3 y + x").derivative("x"), P("3 x^2 y + 1"));
  EXPECT_EQ(P("x^2 + y").substitute("x", P("t + 1")), P("t^2 + 2 t + 1 + y"));
  EXPECT_EQ(P("x + 2 y").substitute({{"x", P("y")}, {"y", P("x")}}), P("y + 2 x"));
}

TEST(Polynomial, EvaluateExact) {
  const Rational v = P("x^2/3 - y").evaluate(std::map<std::string, Rational>{{"x", Rational(3)}, {"y", Rational(1, 2)}});
  EXPECT_EQ(v, Rational(5, 2));
}

TEST(Resultant, LinearFactors) { EXPECT_EQ(resultant(P("x - a"), P("x - b"), "x"), P("a - b")); }

TEST(Resultant, SharedRootGivesZero) {
  EXPECT_TRUE(resultant(P("(x-1)(x-2)"), P("(x-1)(x-3)"), "x").is_zero());
}

TEST(Resultant, RejectsDegreeZero) {
  EXPECT_THROW(resultant(P("y"), P("x - 1"), "x"), DegreeError);
  EXPECT_THROW(resultant(P("x"), P("3"), "x"), DegreeError);
}

TEST(Resultant, SwapSignProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + trial % 4;
    const int n = 1 + (trial / 4) % 4;
    Polynomial p = random_univariate(rng, "x", m) + P("y") * random_univariate(rng, "x", m - 1 >= 0 ? m - 1 : 0);
    Polynomial q = random_univariate(rng, "x", n) * P("1 + y");
    if (p.degree("x") < 1 || q.degree("x") < 1) continue;
    const int sign = (p.degree("x") * q.degree("x")) % 2 ? -1 : 1;
    EXPECT_EQ(resultant(p, q, "x"), resultant(q, p, "x").scaled(sign));
  }
}

TEST(Discriminant, Quadratic) { EXPECT_EQ(discriminant(P("x^2 + b x + c"), "x"), P("b^2 - 4 c")); }

TEST(Discriminant, RepeatedRoot) { EXPECT_TRUE(discriminant(P("(x - r)^2"), "x").is_zero()); }

TEST(Discriminant, CubicMatchesRootProduct) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial p = random_univariate(rng, "x", 3, true);
    const double d = discriminant(p, "x").constant_value().get_d();
    // Oracle: companion-free Durand-Kerner on the monic cubic.
    auto c = p.univariate("x");
    std::complex<double> z[3] = {{0.4, 0.9}, {-0.7, 0.3}, {1.1, -0.5}};
    for (int it = 0; it < 500; ++it) {
      for (int k = 0; k < 3; ++k) {
        std::complex<double> v = c[3].get_d();
        for (int j = 2; j >= 0; --j) v = v * z[k] + c[j].get_d();
        std::complex<double> den = 1;
        for (int j = 0; j < 3; ++j)
          if (j != k) den *= z[k] - z[j];
        z[k] -= v / den;
      }
    }
    std::complex<double> prod = 1;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) prod *= (z[i] - z[j]) * (z[i] - z[j]);
    EXPECT_NEAR(prod.real(), d, 1e-9 * std::max(1.0, std::fabs(d)));
  }
}

TEST(Discriminant, RejectsLowDegree) { EXPECT_THROW(discriminant(P("x + y"), "x"), DegreeError); }

TEST(Gcd, Basic) {
  EXPECT_EQ(gcd(P("x^2 - 1"), P("x - 1")), P("x - 1"));
  EXPECT_EQ(gcd(P("x^2 - 1"), Polynomial{}), P("x^2 - 1"));
  EXPECT_EQ(gcd(P("-2 x^2 + 2"), Polynomial{}), P("x^2 - 1"));
}

TEST(Gcd, RandomCoprimeIsOne) {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 20) {
    const Polynomial p = random_bivariate(rng, 3);
    const Polynomial q = random_bivariate(rng, 3);
    if (p.degree("x") < 1 || q.degree("x") < 1) continue;
    // Oracle: a nonzero resultant in x with a nonzero resultant in y certifies coprimality.
    if (resultant(p, q, "x").is_zero()) continue;
    EXPECT_EQ(gcd(p, q), Polynomial(1));
    ++checked;
  }
}

TEST(Gcd, RecoversConstructedCommonFactor) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 15) {
    const Polynomial p = random_bivariate(rng, 2);
    const Polynomial q = random_bivariate(rng, 2);
    const Polynomial w = random_bivariate(rng, 2);
    if (p.degree("x") < 1 || q.degree("x") < 1 || w.is_constant()) continue;
    if (!gcd(p, q).is_constant()) continue;
    const Polynomial a = Polynomial(Rational(3, 7)) * p * w;
    const Polynomial b = Polynomial(Rational(-5, 2)) * q * w;
    const Polynomial g = gcd(a, b);
    EXPECT_EQ(g, w.primitive());
    EXPECT_TRUE(try_exact_divide(a, g).has_value());
    EXPECT_TRUE(try_exact_divide(b, g).has_value());
    ++checked;
  }
}

TEST(ExactDivide, CubeDifference) { EXPECT_EQ(exact_divide(P("x^3 - lambda^3"), P("x - lambda")), P("x^2 + lambda x + lambda^2")); }

TEST(ExactDivide, RoundTrip) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    const Polynomial p = random_bivariate(rng, 3);
    const Polynomial d = random_bivariate(rng, 2);
    if (d.is_zero()) continue;
    EXPECT_EQ(exact_divide(p * d, d), p);
  }
}

TEST(ExactDivide, ReportsFailingVariable) {
  try {
    exact_divide(P("x^2 + y"), P("x + 1"));
    FAIL() << "expected DivisionError";
  } catch (const DivisionError& e) {
    EXPECT_FALSE(e.variable().empty());
  }
  try {
    exact_divide(P("y + 1"), P("y^2 + 1"));
    FAIL() << "expected DivisionError";
  } catch (const DivisionError& e) {
    EXPECT_EQ(e.variable(), "y");
  }
}

TEST(SquareRoot, PerfectSquareAndObstruction) {
  const Polynomial b = P("x^2 y - 3 t x + 1/2");
  auto s = exact_sqrt(b * b);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(*s, b.leading_coefficient() > 0 ? b : -b);
  Polynomial obstruction;
  EXPECT_FALSE(exact_sqrt(b * b + P("x"), &obstruction).has_value());
  EXPECT_FALSE(obstruction.is_zero());
}

TEST(SquareFree, MultivariatePart) {
  EXPECT_EQ(squarefree_part(P("x^3 (x + y)^2 (y - 1)")), P("x (x + y) (y - 1)").primitive());
}

TEST(ProductResultant, ExactIdentityForRandomCoprimePairs) {
  // R(f,f') = (-1)^{mn} (m! n!/N! f^(N)(0)/(g^(m)(0) h^(n)(0)))^{N-1} R(g,g') R(h,h') R(g,h)^2
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 100) {
    const int m = 1 + static_cast<int>(rng() % 4);
    const int n = 1 + static_cast<int>(rng() % 4);
    const Polynomial g = random_univariate(rng, "x", m);
    const Polynomial h = random_univariate(rng, "x", n);
    if (resultant(g, h, "x").is_zero()) continue;
    const Polynomial f = g * h;
    const int N = m + n;
    auto fact = [](int k) {
      Rational r = 1;
      for (int i = 2; i <= k; ++i) r *= i;
      return r;
    };
    // f^(N)(0) = N! lc(f), etc.
    const Rational base = fact(m) * fact(n) / fact(N) * (fact(N) * f.leading_coefficient()) /
                          (fact(m) * g.leading_coefficient() * fact(n) * h.leading_coefficient());
    Rational pw = 1;
    for (int k = 0; k < N - 1; ++k) pw *= base;
    auto res_or_one = [](const Polynomial& p) {
      // 1x1 Sylvester matrix when p is linear.
      return p.degree("x") >= 2 ? resultant(p, p.derivative("x"), "x").constant_value() : p.leading_coefficient();
    };
    const auto rgh = resultant(g, h, "x").constant_value();
    Rational rhs = pw * res_or_one(g) * res_or_one(h) * rgh * rgh;
    if ((m * n) % 2) rhs = -rhs;
    const Rational lhs = resultant(f, f.derivative("x"), "x").constant_value();
    EXPECT_EQ(lhs, rhs) << "g=" << g << " h=" << h;
    ++checked;
  }
}

TEST(Serialize, TextRoundTrip) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial p = random_bivariate(rng, 4) * P("3/7 t - 1/2 lambda");
    EXPECT_EQ(parse_polynomial(to_text(p)), p);
    EXPECT_EQ(to_text(parse_polynomial(to_text(p))), to_text(p));
  }
  EXPECT_EQ(to_text(P("0.5 x^2 - x y + 3")), "-x y + 1/2 * x^2 + 3");
}

TEST(Serialize, JsonRoundTrip) {
  const Polynomial p = P("123456789012345678901234567890/7 x^3 y - z0 + 1/3");
  EXPECT_EQ(polynomial_from_json(nlohmann::json::parse(to_json(p).dump())), p);
}

TEST(Serialize, ParseErrorsCarryColumn) {
  EXPECT_THROW(parse_polynomial("x + * y"), ParseError);
  EXPECT_THROW(parse_polynomial("x / y"), ParseError);
  EXPECT_THROW(parse_polynomial("(x + 1"), ParseError);
  try {
    parse_polynomial("x + $");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(RationalFunction, ArithmeticAndDerivative) {
  RationalFunction f(P("x^2 - 1"), P("x - 1"));
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f.numerator(), P("x + 1"));
  RationalFunction g(P("1"), P("t"));
  EXPECT_EQ((g * RationalFunction(P("t^2"))).numerator(), P("t"));
  EXPECT_EQ(g.derivative("t"), RationalFunction(P("-1"), P("t^2")));
  EXPECT_EQ(RationalFunction(P("x")).substitute("x", g), g);
}
