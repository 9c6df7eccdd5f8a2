#pragma once

// Flow map and reduced action for V = 0, k_t(x) = a.x and initial action
// S0(x0) = p(x0) + sum_alpha g_alpha(x0) x0^alpha.
//
// Coordinates: initial data (x0, y0, z0), Eulerian point (x, y, z), time t.
// The reduced action has a single 1/t pole and is stored as t*f.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "burgers/polyalg.hpp"

namespace burgers::action {

using polyalg::Polynomial;
using polyalg::Rational;
using polyalg::RationalFunction;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& initial_names() {
  static const std::vector<std::string> n{"x0", "y0", "z0"};
  return n;
}
inline const std::vector<std::string>& eulerian_names() {
  static const std::vector<std::string> n{"x", "y", "z"};
  return n;
}

struct InitialData {
  int dimension = 2;
  Polynomial S0;
  std::vector<double> a;  ///< noise direction, length dimension (zero allowed)
  double epsilon = 0.0;
};

/// Split of S0 into p(x0) and the coefficients g_alpha(x0), alpha = 2..d.
struct Decomposition {
  Polynomial p;
  std::vector<Polynomial> g;  ///< g[0] multiplies y0, g[1] multiplies z0
};

/// Checks the supported form and returns its decomposition.
inline Decomposition validate(const InitialData& data) {
  const int d = data.dimension;
  if (d != 2 && d != 3) throw ValidationError("dimension must be 2 or 3, got " + std::to_string(d));
  if (!data.a.empty() && static_cast<int>(data.a.size()) != d) {
    throw ValidationError("noise direction has " + std::to_string(data.a.size()) + " components, expected " +
                          std::to_string(d));
  }
  if (!(data.epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
  for (const auto& v : data.S0.variables()) {
    bool ok = false;
    for (int i = 0; i < d; ++i) ok = ok || v == initial_names()[i];
    if (!ok) throw ValidationError("S0 uses variable '" + v + "' outside (" + (d == 2 ? "x0, y0" : "x0, y0, z0") + ")");
  }
  Decomposition out;
  out.g.assign(d - 1, Polynomial{});
  for (const auto& term : data.S0.terms()) {
    const Polynomial mono = Polynomial::from_terms(data.S0.variables(), {term});
    int upper = -1;
    unsigned upper_degree = 0;
    for (int i = 1; i < d; ++i) {
      const unsigned e = data.S0.exponent(term.first, initial_names()[i]);
      if (e == 0) continue;
      upper_degree += e;
      upper = i;
    }
    if (upper_degree > 1) {
      throw ValidationError("S0 term '" + polyalg::to_text(mono) + "' is not affine in the upper coordinates");
    }
    if (upper < 0) {
      out.p += mono;
    } else {
      out.g[upper - 1] += mono.substitute(initial_names()[upper], Rational(1));
    }
  }
  bool any = false;
  for (const auto& g : out.g) any = any || !g.is_zero();
  if (!any) throw ValidationError("S0 has no upper-coordinate term; the problem is one-dimensional");
  return out;
}

/// x = Phi_t(x0) = x0 + t grad S0(x0) - eps a int_0^t W; DPhi = I + t Hess S0.
struct FlowMap {
  int dimension = 2;
  std::vector<Polynomial> Phi;      ///< deterministic part, in (x0.., t)
  std::vector<Polynomial> Phi_dot;  ///< grad S0; the noise adds -eps a W_t
  std::vector<std::vector<Polynomial>> jacobian;
  std::vector<double> noise_translation;  ///< -eps a, multiplies int_0^t W ds

  Polynomial jacobian_determinant() const {
    return polyalg::bareiss_determinant(jacobian);
  }

  /// Phi_t at a point for a given value of int_0^t W ds.
  std::vector<double> evaluate(const std::vector<double>& x0, double t, double int_w = 0.0) const {
    std::map<std::string, double> at{{"t", t}};
    for (int i = 0; i < dimension; ++i) at[initial_names()[i]] = x0[i];
    std::vector<double> out(dimension);
    for (int i = 0; i < dimension; ++i) {
      out[i] = Phi[i].evaluate(at) + (noise_translation.empty() ? 0.0 : noise_translation[i] * int_w);
    }
    return out;
  }
};

inline FlowMap build_flow(const InitialData& data) {
  validate(data);
  const int d = data.dimension;
  FlowMap fm;
  fm.dimension = d;
  const Polynomial t = polyalg::var("t");
  for (int i = 0; i < d; ++i) {
    const Polynomial grad = data.S0.derivative(initial_names()[i]);
    fm.Phi.push_back(polyalg::var(initial_names()[i]) + t * grad);
    fm.Phi_dot.push_back(grad);
  }
  fm.jacobian.assign(d, std::vector<Polynomial>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      fm.jacobian[i][j] = t * data.S0.derivative(initial_names()[i]).derivative(initial_names()[j]);
      if (i == j) fm.jacobian[i][j] += Polynomial(1);
    }
  }
  fm.noise_translation.assign(d, 0.0);
  for (int i = 0; i < d && !data.a.empty(); ++i) fm.noise_translation[i] = -data.epsilon * data.a[i];
  return fm;
}

struct NoiseShift {
  /// The random reduced action equals the deterministic one evaluated at
  /// x + eps a int W, minus eps W_t a.x, minus (eps^2/2)|a|^2 int W^2.
  std::vector<double> translation;  ///< -eps a: sets move by translation * int_0^t W ds
  double epsilon = 0.0;
  std::vector<double> a;
};

struct ReducedAction {
  int dimension = 2;
  Polynomial tf;  ///< t * f in (x0, x, y[, z], t)
  int pole_order = 1;
  std::vector<RationalFunction> chain;  ///< x0^alpha as functions of (x0, x, t), alpha = 2..d
  Decomposition parts;
  NoiseShift noise;
  Polynomial S0;

  RationalFunction f() const { return RationalFunction(tf, polyalg::var("t")); }
  /// Degree of f in x0.
  int degree() const { return tf.degree("x0"); }

  /// t * f with the Eulerian point translated by `shift` (exact).
  Polynomial translated(const std::vector<Rational>& shift) const {
    std::map<std::string, Polynomial> sub;
    for (int i = 0; i < dimension; ++i) {
      if (shift[i] != 0) sub[eulerian_names()[i]] = polyalg::var(eulerian_names()[i]) + Polynomial(shift[i]);
    }
    return tf.substitute(sub);
  }

  /// Random reduced action value f_random(x0; x, t) for one noise realisation.
  double random_value(double x0, const std::vector<double>& x, double t, double w_t, double int_w,
                      double int_w2) const {
    std::map<std::string, double> at{{"x0", x0}, {"t", t}};
    double ax = 0.0;
    double a2 = 0.0;
    for (int i = 0; i < dimension; ++i) {
      const double ai = noise.a.empty() ? 0.0 : noise.a[i];
      at[eulerian_names()[i]] = x[i] + noise.epsilon * ai * int_w;
      ax += ai * x[i];
      a2 += ai * ai;
    }
    const double eps = noise.epsilon;
    return tf.evaluate(at) / t - eps * w_t * ax - 0.5 * eps * eps * a2 * int_w2;
  }
};

/// Eliminates x0^d, ..., x0^2 from the free action |x - x0|^2/(2t) + S0.
inline ReducedAction build_reduced_action(const InitialData& data) {
  const Decomposition parts = validate(data);
  const int d = data.dimension;
  const Polynomial t = polyalg::var("t");
  const Polynomial x0 = polyalg::var("x0");
  ReducedAction ra;
  ra.dimension = d;
  ra.parts = parts;
  ra.S0 = data.S0;
  // t * A = |x - x0|^2 / 2 + t S0. d/dx0^alpha: (x0^alpha - x_alpha) + t g_alpha(x0) = 0,
  // whose coefficient of x0^alpha is identically 1.
  Polynomial tA = (x0 - polyalg::var("x")).pow(2).scaled(Rational(1, 2)) + t * data.S0;
  for (int alpha = d; alpha >= 2; --alpha) {
    const std::string& name = initial_names()[alpha - 1];
    tA += (polyalg::var(name) - polyalg::var(eulerian_names()[alpha - 1])).pow(2).scaled(Rational(1, 2));
  }
  std::map<std::string, Polynomial> sub;
  for (int alpha = d; alpha >= 2; --alpha) {
    const std::string& name = initial_names()[alpha - 1];
    const Polynomial eq = tA.derivative(name);
    const Polynomial coeff = eq.leading_coefficient(name);
    if (eq.degree(name) != 1 || coeff.is_zero()) {
      throw ValidationError("chain equation for coordinate " + std::to_string(alpha) + " is degenerate");
    }
    const Polynomial rest = eq - coeff * polyalg::var(name);
    if (!coeff.is_constant()) throw ValidationError("chain coefficient for coordinate " + std::to_string(alpha) + " is not constant");
    sub[name] = -rest / coeff.constant_value();
  }
  ra.tf = tA.substitute(sub);
  for (int alpha = 2; alpha <= d; ++alpha) ra.chain.emplace_back(sub.at(initial_names()[alpha - 1]));
  ra.pole_order = 1;
  ra.noise.epsilon = data.epsilon;
  ra.noise.a = data.a.empty() ? std::vector<double>(d, 0.0) : data.a;
  ra.noise.translation.resize(d);
  for (int i = 0; i < d; ++i) ra.noise.translation[i] = -data.epsilon * ra.noise.a[i];
  return ra;
}

/// Symbolic identity: det(I + t Hess S0) on the chain equals (t f)''.
/// Equivalently det Hess A = f'' * prod_alpha (d^2 A / d(x0^alpha)^2) with
/// each chain factor equal to 1/t.
inline bool hessian_product_identity(const InitialData& data) {
  const FlowMap fm = build_flow(data);
  const ReducedAction ra = build_reduced_action(data);
  std::map<std::string, Polynomial> sub;
  for (int alpha = 2; alpha <= data.dimension; ++alpha) {
    sub[initial_names()[alpha - 1]] = ra.chain[alpha - 2].numerator();
  }
  const Polynomial lhs = fm.jacobian_determinant().substitute(sub);
  return lhs == ra.tf.derivative("x0", 2);
}

struct SamplePoint {
  Rational x0;
  std::vector<Rational> x;
  Rational t;
};

/// Exact pointwise check of |det Hess A| = |f''| * prod of chain factors.
inline bool hessian_product_check(const InitialData& data, const SamplePoint& pt) {
  const FlowMap fm = build_flow(data);
  const ReducedAction ra = build_reduced_action(data);
  const int d = data.dimension;
  std::map<std::string, Rational> at{{"x0", pt.x0}, {"t", pt.t}};
  for (int i = 0; i < d; ++i) at[eulerian_names()[i]] = pt.x[i];
  // Upper coordinates from the chain.
  std::map<std::string, Rational> x0at{{"x0", pt.x0}, {"t", pt.t}};
  for (int alpha = 2; alpha <= d; ++alpha) x0at[initial_names()[alpha - 1]] = ra.chain[alpha - 2].evaluate(at);
  // Hess A = DPhi / t.
  std::vector<std::vector<Polynomial>> hess(d, std::vector<Polynomial>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) hess[i][j] = Polynomial(fm.jacobian[i][j].evaluate(x0at) / pt.t);
  }
  const Rational det = polyalg::bareiss_determinant(hess).constant_value();
  const Rational fpp = ra.tf.derivative("x0", 2).evaluate(at) / pt.t;
  Rational product = fpp;
  for (int alpha = 2; alpha <= d; ++alpha) product /= pt.t;  // d^2 A / d(x0^alpha)^2 = 1/t
  return abs(det) == abs(product);
}

/// Result of matching critical points of f with real pre-images of x.
struct PreimageCheck {
  int critical_points = 0;     ///< distinct real roots of f'
  bool residual_exact_zero = false;  ///< Phi_t(x0) - x vanishes modulo f' exactly
  double max_float_residual = 0.0;
  bool distinct = false;       ///< distinct roots give distinct pre-images
};

/// Critical points of f at (x, t) versus real solutions of Phi_t(x0) = x.
/// The residual Phi_t(x0, chain(x0)) - x is reduced modulo f'(x0) in Q[x0]
/// and must vanish identically, which certifies Phi_t(x0) = x at every root.
inline PreimageCheck preimage_bijection(const InitialData& data, const std::vector<Rational>& x, const Rational& t) {
  const FlowMap fm = build_flow(data);
  const ReducedAction ra = build_reduced_action(data);
  const int d = data.dimension;
  std::map<std::string, Polynomial> xsub{{"t", Polynomial(t)}};
  for (int i = 0; i < d; ++i) xsub[eulerian_names()[i]] = Polynomial(x[i]);
  const Polynomial fp = ra.tf.derivative("x0").substitute(xsub);
  std::map<std::string, Polynomial> chain_sub{{"t", Polynomial(t)}};
  for (int alpha = 2; alpha <= d; ++alpha) {
    chain_sub[initial_names()[alpha - 1]] = ra.chain[alpha - 2].numerator().substitute(xsub);
  }
  PreimageCheck out;
  const polyalg::Dense fpd = fp.univariate("x0");
  out.residual_exact_zero = true;
  std::vector<polyalg::Dense> residuals;
  for (int i = 0; i < d; ++i) {
    const Polynomial r = fm.Phi[i].substitute(chain_sub) - Polynomial(x[i]);
    const polyalg::Dense rd = r.is_zero() ? polyalg::Dense{} : r.univariate("x0");
    const auto rem = rd.empty() ? polyalg::Dense{} : polyalg::uv::divmod(rd, fpd).second;
    out.residual_exact_zero = out.residual_exact_zero && rem.empty();
    residuals.push_back(rd);
  }
  const auto rs = polyalg::roots(fpd);
  out.critical_points = static_cast<int>(rs.real_roots.size());
  std::vector<std::vector<double>> images;
  for (const auto& root : rs.real_roots) {
    std::vector<double> pre{root.value};
    std::map<std::string, double> at{{"x0", root.value}};
    for (int alpha = 2; alpha <= d; ++alpha) pre.push_back(chain_sub[initial_names()[alpha - 1]].evaluate(at));
    double res = 0.0;
    std::map<std::string, double> pat{{"t", t.get_d()}};
    for (int i = 0; i < d; ++i) pat[initial_names()[i]] = pre[i];
    for (int i = 0; i < d; ++i) res = std::max(res, std::fabs(fm.Phi[i].evaluate(pat) - x[i].get_d()));
    out.max_float_residual = std::max(out.max_float_residual, res);
    images.push_back(pre);
  }
  out.distinct = true;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) out.distinct = out.distinct && images[i] != images[j];
  }
  return out;
}

}  // namespace burgers::action
