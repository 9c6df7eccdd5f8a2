#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "burgers/geometry.hpp"

using namespace burgers;
using namespace burgers::geometry;
using polyalg::make_rational;
using polyalg::parse_polynomial;

namespace {

action::InitialData data(const char* s0, double eps = 0.0, std::vector<double> a = {0.0, 0.0}) {
  action::InitialData id;
  id.dimension = 2;
  id.S0 = parse_polynomial(s0);
  id.epsilon = eps;
  id.a = a;
  return id;
}

ReducedAction reduced(const char* s0, double eps = 0.0, std::vector<double> a = {0.0, 0.0}) {
  return action::build_reduced_action(data(s0, eps, a));
}

const char* kCusp = "x0^2 y0/2";
const char* kSwallow = "x0^5 + x0^2 y0";
const char* kPeres = "x0^5 + x0^6 y0";

/// Equal up to a nonzero rational factor.
bool proportional(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return p.is_zero() && q.is_zero();
  return p.primitive() == q.primitive() || p.primitive() == q.primitive().scaled(Rational(-1));
}

/// Real roots of a univariate double polynomial by grid sign changes plus bisection.
std::vector<double> grid_roots(const std::function<double(double)>& g, double lo, double hi, int n) {
  std::vector<double> out;
  double a = lo, ga = g(a);
  for (int i = 1; i <= n; ++i) {
    double b = lo + (hi - lo) * i / n, gb = g(b);
    if (ga == 0.0) out.push_back(a);
    else if ((ga < 0) != (gb < 0) && gb != 0.0) {
      double l = a, r = b, gl = ga;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (l + r), gm = g(m);
        if ((gm < 0) == (gl < 0)) l = m, gl = gm;
        else r = m;
      }
      out.push_back(0.5 * (l + r));
    }
    a = b;
    ga = gb;
  }
  return out;
}

}  // namespace

// ---- caustic ----------------------------------------------------------------

TEST(Caustic, GenericCuspParameterisation) {
  const auto cd = compute_caustic(reduced(kCusp));
  EXPECT_EQ(cd.preparam[0], RationalFunction(parse_polynomial("t^2 lambda^3")));
  EXPECT_EQ(cd.preparam[1], RationalFunction(parse_polynomial("3/2 t^2 lambda^2 - 1"), parse_polynomial("t")));
  EXPECT_EQ(*cd.equation, parse_polynomial("8 y^3 t^3 + 24 y^2 t^2 - 27 x^2 t^2 + 24 y t + 8"));
}

TEST(Caustic, FirstAndSecondDerivativeVanishIdentically) {
  for (const char* s : {kCusp, kSwallow, kPeres}) {
    const auto ra = reduced(s);
    const auto cd = compute_caustic(ra, {false});
    for (int order : {1, 2}) {
      Polynomial d = ra.tf;
      for (int k = 0; k < order; ++k) d = d.derivative("x0");
      RationalFunction r(d.rename("x0", "lambda"));
      r = r.substitute("x", cd.preparam[0]).substitute("y", cd.preparam[1]);
      EXPECT_TRUE(r.numerator().is_zero()) << s << " order " << order;
    }
  }
}

TEST(Caustic, EquationVanishesOnParameterisation) {
  for (const char* s : {kCusp, kSwallow}) {
    const auto cd = compute_caustic(reduced(s));
    RationalFunction r(*cd.equation);
    r = r.substitute("x", cd.preparam[0]).substitute("y", cd.preparam[1]);
    EXPECT_TRUE(r.numerator().is_zero()) << s;
  }
}

TEST(Caustic, ThirdDerivativeVanishesAtCusps) {
  // Cusp parameters at t = 1 are rational here: 0 for the cusp, 0 and 1/5 for the swallowtail.
  const std::vector<std::pair<const char*, std::vector<Rational>>> cases{{kCusp, {Rational(0)}},
                                                                         {kSwallow, {Rational(0), make_rational(1, 5)}}};
  for (const auto& [s, lams] : cases) {
    const auto ra = reduced(s);
    const auto cd = compute_caustic(ra, {false});
    const Rational t(1);
    const Polynomial f3 = ra.tf.derivative("x0").derivative("x0").derivative("x0");
    const auto found = cd.cusp_params(t);
    ASSERT_EQ(found.size(), lams.size()) << s;
    for (std::size_t i = 0; i < lams.size(); ++i) {
      EXPECT_NEAR(found[i], lams[i].get_d(), 1e-12);
      EXPECT_EQ(cd.cusp_condition.evaluate(std::map<std::string, Rational>{{"lambda", lams[i]}, {"t", t}}), 0);
      const auto x = cd.point_exact(lams[i], t);
      const Rational v = f3.evaluate(std::map<std::string, Rational>{{"x0", lams[i]}, {"x", x[0]}, {"y", x[1]}, {"t", t}});
      EXPECT_EQ(v, 0) << s << " lambda " << lams[i];
    }
  }
}

TEST(Caustic, SwallowtailCuspPoint) {
  const auto cd = compute_caustic(reduced(kSwallow), {false});
  EXPECT_TRUE(proportional(cd.cusp_condition, parse_polynomial("lambda t - 5 lambda^2")));
  const auto p = cd.point_exact(make_rational(1, 5), Rational(1));
  EXPECT_EQ(p[0], make_rational(1, 125));
  EXPECT_EQ(p[1], make_rational(-23, 50));
}

TEST(Caustic, NoPreCausticForSmallTime) {
  for (const char* s : {kCusp, kSwallow}) {
    const auto cd = compute_caustic(reduced(s), {false});
    const Polynomial J = cd.pre_caustic.substitute("t", make_rational(1, 1000));
    int sign = 0;
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const double v = J.evaluate(std::map<std::string, double>{{"x0", -2 + 0.1 * i}, {"y0", -2 + 0.1 * j}});
        const int sv = v > 0 ? 1 : -1;
        if (sign == 0) sign = sv;
        EXPECT_EQ(sv, sign) << s;
      }
    }
  }
}

TEST(Caustic, NoiseTranslatesTheCaustic) {
  const Rational s0 = make_rational(3, 10);  // eps a int W along x
  const auto det = reduced(kSwallow);
  const auto cd = compute_caustic(det);
  ReducedAction rnd = det;
  rnd.tf = det.translated({s0, Rational(0)});
  const Polynomial C_rnd = caustic_equation(rnd);
  EXPECT_TRUE(proportional(C_rnd, cd.translated_equation({-s0, Rational(0)})));
  // Point map translation: eps = 1/2, a = (1, 0), int W = 3/5.
  const auto noisy = compute_caustic(reduced(kSwallow, 0.5, {1.0, 0.0}), {false});
  const auto p0 = cd.point(0.1, 1.0);
  const auto p1 = noisy.point(0.1, 1.0, 0.6);
  EXPECT_NEAR(p1[0], p0[0] - 0.3, 1e-15);
  EXPECT_NEAR(p1[1], p0[1], 1e-15);
}

// ---- level surfaces ---------------------------------------------------------

TEST(Level, GenericCuspZeroLevelParameterisation) {
  const auto ra = reduced(kCusp);
  for (double t : {0.5, 1.0, 2.0}) {
    const Polynomial rho = level_surface(ra, Rational(0), polyalg::from_double(t));
    int checked = 0;
    for (int k = 0; k < 50; ++k) {
      const double s = (-0.98 + 1.96 * k / 49.0) / t;
      const double r = std::sqrt(1 - t * t * s * s);
      for (int sg : {1, -1}) {
        const double x = 0.5 * s * (1 + sg * r);
        const double y = (t * t * s * s - 1 + sg * r) / (2 * t);
        EXPECT_LT(std::fabs(rho.evaluate(std::map<std::string, double>{{"x", x}, {"y", y}})), 1e-10);
        ++checked;
      }
    }
    EXPECT_EQ(checked, 100);
  }
}

TEST(Level, VeryNegativeLevelHasNoPointsInWindow) {
  // Pre-images of the window are bounded, so S0 + t|grad S0|^2/2 is bounded there.
  const auto ra = reduced(kCusp);
  const Polynomial rho = level_surface(ra, Rational(-100), Rational(1));
  int sign = 0;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double v = rho.evaluate(std::map<std::string, double>{{"x", -1 + 0.05 * i}, {"y", -1 + 0.05 * j}});
      ASSERT_NE(v, 0.0);
      const int sv = v > 0 ? 1 : -1;
      if (sign == 0) sign = sv;
      EXPECT_EQ(sv, sign);
    }
  }
}

TEST(Level, DoublePointsEqualCausticAndMaxwellKlein) {
  const auto ra = reduced(kCusp);
  const auto cd = compute_caustic(ra);
  const auto ld = level_double_points(ra);
  const auto mk = maxwell_klein(ra, *cd.equation);
  EXPECT_EQ(zero_set(ld.gcd), zero_set(mk.B * mk.C));
  EXPECT_EQ(zero_set(ld.gcd), zero_set(mk.D));
}

// ---- Maxwell-Klein ----------------------------------------------------------

TEST(MaxwellKlein, SwallowtailFactorisation) {
  const auto ra = reduced(kSwallow);
  const auto cd = compute_caustic(ra);
  const auto mk = maxwell_klein(ra, *cd.equation);
  EXPECT_EQ(mk.c_exponent, 3);
  EXPECT_EQ(mk.b_exponent, 2);
  const Polynomial expected = parse_polynomial(
      "-675 + 52 t^4 - t^8 + 3120 t^3 x - 224 t^7 x + 4 t^11 x - 38400 t^2 x^2 + 1408 t^6 x^2 + 128000 t x^3"
      " - 5400 t y + 312 t^5 y - 4 t^9 y + 12480 t^4 x y - 448 t^8 x y - 76800 t^3 x^2 y - 16200 t^2 y^2"
      " + 624 t^6 y^2 - 4 t^10 y^2 + 12480 t^5 x y^2 - 21600 t^3 y^3 + 416 t^7 y^3 - 10800 t^4 y^4");
  EXPECT_TRUE(proportional(mk.B, expected));
  EXPECT_GT(mk.B.leading_coefficient(), 0);
  EXPECT_EQ(mk.B.content(), 1);
  // D = const C^3 B^2 exactly.
  EXPECT_EQ(mk.D, mk.constant * mk.C.pow(3) * mk.B.pow(2));
  EXPECT_EQ(mk.constant.degree("x") + mk.constant.degree("y"), 0);
}

TEST(MaxwellKlein, GenericCusp) {
  const auto ra = reduced(kCusp);
  const auto mk = maxwell_klein(ra, *compute_caustic(ra).equation);
  EXPECT_EQ(mk.c_exponent, 3);
  EXPECT_EQ(mk.b_exponent, 2);
  EXPECT_EQ(mk.B, parse_polynomial("x"));
}

TEST(MaxwellKlein, SingleCriticalPointRejected) {
  const auto ra = reduced("x0 y0");
  try {
    double_discriminant(ra);
    FAIL() << "expected an error";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("fewer than two critical points"), std::string::npos);
  }
}

TEST(MaxwellKlein, VanishesAtBruteForceMaxwellPoints) {
  const auto ra = reduced(kSwallow);
  const auto mk = maxwell_klein(ra, *compute_caustic(ra).equation);
  const double t = 1.0;
  const Polynomial fp = ra.tf.derivative("x0");
  // Critical points (grid + bisection) and their values, ordered by x0.
  auto crit = [&](double x, double y) {
    auto g = [&](double x0) { return fp.evaluate(std::map<std::string, double>{{"x0", x0}, {"x", x}, {"y", y}, {"t", t}}); };
    std::vector<std::pair<double, double>> out;
    for (double r : grid_roots(g, -3, 3, 6000)) {
      out.emplace_back(r, ra.tf.evaluate(std::map<std::string, double>{{"x0", r}, {"x", x}, {"y", y}, {"t", t}}));
    }
    return out;
  };
  auto argmin = [](const std::vector<std::pair<double, double>>& c) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < c.size(); ++i) if (c[i].second < c[k].second) k = i;
    return k;
  };
  int found = 0;
  for (double y : {-0.47, -0.475, -0.478}) {
    // Global minimiser jumps between two separated pre-images: bisect on their value difference.
    double prev_x = -0.004;
    auto prev = crit(prev_x, y);
    for (int i = 1; i <= 200; ++i) {
      const double x = -0.004 + 0.012 * i / 200;
      const auto cur = crit(x, y);
      if (cur.size() == 4 && prev.size() == 4 && argmin(cur) != argmin(prev)) {
        const std::size_t a = argmin(prev), b = argmin(cur);
        double lo = prev_x, hi = x;
        for (int k = 0; k < 100; ++k) {
          const double m = 0.5 * (lo + hi);
          const auto c = crit(m, y);
          if (c.size() != 4) break;
          if (c[a].second - c[b].second < 0) lo = m; else hi = m;
        }
        const double xm = 0.5 * (lo + hi);
        const auto c = crit(xm, y);
        ASSERT_EQ(c.size(), 4u);
        EXPECT_LT(std::fabs(c[a].second - c[b].second), 1e-10);
        EXPECT_GT(std::fabs(c[a].first - c[b].first), 1e-3);
        EXPECT_LT(relative_value(mk.D, {{"x", xm}, {"y", y}, {"t", t}}), 1e-12);
        EXPECT_LT(relative_value(mk.B, {{"x", xm}, {"y", y}, {"t", t}}), 1e-9);
        ++found;
      }
      prev_x = x;
      prev = cur;
    }
  }
  EXPECT_GE(found, 3);
}

TEST(MaxwellKlein, CrunodeAcnodeSplit) {
  const auto ra = reduced(kSwallow);
  const auto mk = maxwell_klein(ra, *compute_caustic(ra).equation);
  const auto pts = sample_curve(mk.B, Rational(1), -0.02, 0.02, -0.55, -0.4, 120);
  ASSERT_GE(pts.size(), 100u);
  int crunodes = 0, acnodes = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto bp = classify_b_point(ra, pts[i].first, pts[i].second, 1.0, 1e-10);
    if (bp.near_real_pairs > 0) continue;
    if (bp.real_critical_points == 4) {
      EXPECT_EQ(bp.kind, DoublePointKind::Crunode) << pts[i].first << "," << pts[i].second;
      ++crunodes;
    } else {
      EXPECT_EQ(bp.real_critical_points, 2);
      EXPECT_EQ(bp.kind, DoublePointKind::Acnode);
      ++acnodes;
    }
  }
  EXPECT_GT(crunodes, 0);
  EXPECT_GT(acnodes, 0);
}

TEST(PreMaxwell, GenericCuspFactor) {
  const auto pm = pre_maxwell(reduced(kCusp));
  EXPECT_EQ(polyalg::extract_factor(pm.pre_maxwell, parse_polynomial("1 + t y0")).exponent, 1);
}

TEST(PreMaxwell, SwallowtailCuspsAtPreCausticIntersections) {
  const auto ra = reduced(kSwallow);
  const auto pm = pre_maxwell(ra);
  int simple = 0;
  for (const auto& m : premaxwell_precaustic_points(ra, pm, Rational(1))) simple += m.multiplicity == 1;
  EXPECT_EQ(simple, 2);
}

TEST(PreMaxwell, EvenInitialDataIsSymmetric) {
  const auto pm = pre_maxwell(reduced("x0^4 + x0^2 y0"));
  const Polynomial flipped = pm.pre_maxwell.substitute("x0", parse_polynomial("-x0"));
  EXPECT_TRUE(proportional(flipped, pm.pre_maxwell));
}

// ---- hot / cool -------------------------------------------------------------

TEST(HotCool, DeflatedPolynomials) {
  const auto ra = reduced(kSwallow);
  const auto cd = compute_caustic(ra, {false});
  const auto sym = hot_cool_symbolic(ra, cd);
  EXPECT_TRUE(proportional(sym.F, parse_polynomial("12 lambda^2 - 3 lambda t + 6 lambda x0 - t x0 + 2 x0^2")));
  EXPECT_TRUE(proportional(sym.G, parse_polynomial("15 lambda^2 - 4 lambda t + 10 lambda x0 - 2 t x0 + 5 x0^2")));
  // Resubstitution: (x0 - lambda)^3 F~ reproduces f(x0) - f(lambda) up to a factor free of x0.
  const Polynomial num = action_on_caustic(ra, cd);
  const Polynomial lhs = num - num.substitute("x0", polyalg::var("lambda"));
  const Polynomial lin = polyalg::var("x0") - polyalg::var("lambda");
  EXPECT_TRUE(polyalg::try_exact_divide(lhs, lin.pow(3) * sym.F).has_value());
}

TEST(HotCool, BoundaryPoints) {
  const auto ra = reduced(kSwallow);
  const auto cd = compute_caustic(ra, {false});
  const auto sym = hot_cool_symbolic(ra, cd);
  std::vector<HotCoolBoundary> real;
  for (const auto& b : hot_cool_boundaries(ra, cd, sym, Rational(1))) {
    if (b.label_change) real.push_back(b);
  }
  ASSERT_EQ(real.size(), 2u);
  const double psi_x = -(3 + 8 * std::sqrt(6.0)) / 18000, psi_y = (9 - std::sqrt(6.0)) / 450 - 0.5;
  EXPECT_EQ(real[0].source, 'F');
  EXPECT_NEAR(real[0].point[0], psi_x, 1e-12);
  EXPECT_NEAR(real[0].point[1], psi_y, 1e-12);
  EXPECT_EQ(real[1].source, 'G');
  EXPECT_NEAR(real[1].point[0], -0.002, 1e-12);
  EXPECT_NEAR(real[1].point[1], -0.48, 1e-12);
  const auto at = hot_cool(ra, cd, sym, real[1].lambda, Rational(1));
  EXPECT_TRUE(at.boundary_flag);
}

TEST(HotCool, LabelsAgreeWithBruteForce) {
  const auto ra = reduced(kSwallow);
  const auto cd = compute_caustic(ra, {false});
  const auto sym = hot_cool_symbolic(ra, cd);
  const double t = 1.0;
  const Polynomial fp = ra.tf.derivative("x0");
  int sampled = 0;
  for (int k = 0; k < 40; ++k) {
    const double lambda = -0.31 + 0.0175 * k;
    bool near_special = false;
    for (double s : {-0.0732, -0.0633, 0.2, 0.2633, 0.2732}) near_special = near_special || std::fabs(lambda - s) < 0.004;
    if (near_special) continue;
    const auto x = cd.point(lambda, t);
    auto g = [&](double x0) { return fp.evaluate(std::map<std::string, double>{{"x0", x0}, {"x", x[0]}, {"y", x[1]}, {"t", t}}); };
    auto val = [&](double x0) { return ra.tf.evaluate(std::map<std::string, double>{{"x0", x0}, {"x", x[0]}, {"y", x[1]}, {"t", t}}); };
    double others = INFINITY;
    for (double r : grid_roots(g, -5, 5, 20000)) {
      if (std::fabs(r - lambda) > 1e-4) others = std::min(others, val(r));
    }
    const bool cool = val(lambda) <= others + 1e-12;
    const auto lab = hot_cool(ra, cd, sym, lambda, polyalg::from_double(t));
    EXPECT_EQ(lab.label == Temperature::Cool, cool) << "lambda " << lambda;
    ++sampled;
  }
  EXPECT_GE(sampled, 20);
}

// ---- perestroika ------------------------------------------------------------

TEST(Perestroika, CriticalTime) {
  const auto ra = reduced(kPeres);
  const auto cd = compute_caustic(ra, {false});
  const auto ev = perestroika_detect(ra, cd, 0, 10);
  ASSERT_EQ(ev.size(), 1u);
  const double ref = 4 * std::sqrt(2.0) * std::pow(33.0, 0.75) * std::pow(7.0, -1.75);
  EXPECT_NEAR(ev[0].t, ref, 1e-6);
  EXPECT_TRUE(ev[0].certificate);
  EXPECT_LT(ev[0].dx_dlambda, 1e-8);
  EXPECT_LT(ev[0].d2x_dlambda2, 1e-8);
}

TEST(Perestroika, GenericCuspHasNone) {
  const auto ra = reduced(kCusp);
  const auto cd = compute_caustic(ra, {false});
  // f'''' is a nonzero multiple of t^2 along the whole caustic: no common root with f'''.
  const Polynomial f4 = derivative_on_caustic(ra, cd, 4);
  EXPECT_FALSE(f4.has_variable("lambda"));
  for (int k = 1; k <= 100; ++k) EXPECT_NE(f4.evaluate(std::map<std::string, double>{{"t", 0.1 * k}}), 0.0);
  EXPECT_TRUE(perestroika_detect(ra, cd, 0, 10).empty());
}

TEST(Perestroika, StaticSwallowtailHasNone) {
  const auto ra = reduced(kSwallow);
  EXPECT_TRUE(perestroika_detect(ra, compute_caustic(ra, {false}), 0, 10).empty());
}

// ---- complex double points --------------------------------------------------

TEST(DoublePoints, CountsAcrossCriticalTime) {
  const auto cd = compute_caustic(reduced(kPeres), {false});
  const auto before = complex_double_points(cd, make_rational(12, 5));
  const auto after = complex_double_points(cd, make_rational(27, 10));
  EXPECT_EQ(before.size(), 5u);
  EXPECT_EQ(after.size(), 4u);
  for (const auto& p : before) {
    EXPECT_GT(p.eta, 1e-8);
    EXPECT_FALSE(p.near_window_edge);
  }
}

TEST(DoublePoints, VanishingPairApproachesRealAxis) {
  const auto cd = compute_caustic(reduced(kPeres), {false});
  std::vector<double> etas;
  for (const auto& t : {make_rational(5, 2), make_rational(51, 20), make_rational(129, 50)}) {
    double m = INFINITY;
    for (const auto& p : complex_double_points(cd, t)) m = std::min(m, p.eta);
    etas.push_back(m);
  }
  EXPECT_GT(etas[0], etas[1]);
  EXPECT_GT(etas[1], etas[2]);
}

TEST(DoublePoints, GenericCuspCountConstant) {
  const auto cd = compute_caustic(reduced(kCusp), {false});
  const auto n1 = complex_double_points(cd, Rational(1)).size();
  EXPECT_EQ(complex_double_points(cd, Rational(2)).size(), n1);
  EXPECT_EQ(complex_double_points(cd, Rational(5)).size(), n1);
}

TEST(DoublePoints, ImaginaryPartsVanish) {
  const auto cd = compute_caustic(reduced(kPeres), {false});
  for (const auto& p : complex_double_points(cd, make_rational(12, 5))) {
    const std::map<std::string, std::complex<double>> at{{"lambda", {p.a, p.eta}}, {"t", 2.4}};
    for (const auto& comp : cd.preparam) {
      const auto v = comp.numerator().evaluate(at) / comp.denominator().evaluate(at);
      EXPECT_LT(std::fabs(v.imag()), 1e-9 * (1 + std::abs(v)));
    }
  }
}

// ---- cusp checks ------------------------------------------------------------

TEST(CuspChecks, GenericCusp) {
  const auto ra = reduced(kCusp);
  const auto cd = compute_caustic(ra);
  CuspCheckOptions opt;
  opt.maxwell = false;
  const auto rep = cusp_and_normal_checks(ra, *cd.equation, Rational(1), {make_rational(1, 10), Rational(0)}, opt);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.observed;
  // c > 0: one symmetric pair of cusps.
  const auto pair = level_cusps_exact(ra, *cd.equation, Rational(1), make_rational(1, 10));
  ASSERT_EQ(pair.size(), 2u);
  EXPECT_NEAR(pair[0].x[0], -pair[1].x[0], 1e-12);
  EXPECT_NEAR(pair[0].x[1], pair[1].x[1], 1e-12);
}

TEST(CuspChecks, SwallowtailWithMaxwellCusps) {
  const auto ra = reduced(kSwallow);
  const auto cd = compute_caustic(ra);
  const auto rep = cusp_and_normal_checks(ra, *cd.equation, Rational(1),
                                          {make_rational(1, 10), make_rational(-1, 100), Rational(0)});
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.observed;
  EXPECT_EQ(rep.maxwell_cusps.size(), 2u);
}
