#pragma once

// zeta processes on a sampled Brownian path and zero bracketing.
//   orthogonal: zeta^c = -a eps W + eps^2 W int W - (eps^2/2) int W^2 - c
//   d-dim:      zeta^c = phi(lambda) - eps W a.x_t(lambda) + eps^2 |a|^2 W int W
//                        - (eps^2/2) |a|^2 int W^2 - c,
//               lambda stationary for phi - eps W a.x_t, phi = f(lambda; x_t(lambda), t).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "burgers/geometry/caustic.hpp"
#include "burgers/turbulence/brownian.hpp"

namespace burgers::turbulence {

struct Zero {
  double lo = 0, hi = 0;  ///< bracket (grid neighbours, or a single grid time)
  double time = 0;        ///< linear-interpolation root inside the bracket
};

struct ZeroCrossingRecord {
  std::string process_tag;  ///< "zeta" or "eta"
  std::vector<Zero> zeros;
  std::vector<double> grazes;  ///< |value| below tolerance at a local minimum without sign change
  double c = 0;
  double a = 0, epsilon = 0;
  bool degenerate = false;  ///< process identically zero
  std::uint64_t seed = 0, path = 0;
};

struct SampledProcess {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<int> branch;  ///< branch id per sample (-1 if single-valued)
};

/// Sign changes of v on the grid t, with exact zeros kept as one-point brackets.
inline std::vector<Zero> bracket_zeros(const std::vector<double>& t, const std::vector<double>& v) {
  std::vector<Zero> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) {
      out.push_back({t[k], t[k], t[k]});
      continue;
    }
    if (k + 1 < v.size() && v[k + 1] != 0.0 && (v[k] < 0) != (v[k + 1] < 0)) {
      // Bisection on the interpolated process reduces to the linear root.
      const double s = v[k] / (v[k] - v[k + 1]);
      out.push_back({t[k], t[k + 1], t[k] + s * (t[k + 1] - t[k])});
    }
  }
  return out;
}

/// Local minima of |v| below tol that are not adjacent to a sign change.
inline std::vector<double> find_grazes(const std::vector<double>& t, const std::vector<double>& v, double tol) {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const double m = std::fabs(v[k]);
    if (m == 0.0 || m >= tol) continue;
    if (m > std::fabs(v[k - 1]) || m > std::fabs(v[k + 1])) continue;
    const bool sign_change = (v[k - 1] < 0) != (v[k] < 0) || (v[k] < 0) != (v[k + 1] < 0);
    if (!sign_change) out.push_back(t[k]);
  }
  return out;
}

inline ZeroCrossingRecord make_record(const std::string& tag, const SampledProcess& p, double graze_tol) {
  ZeroCrossingRecord r;
  r.process_tag = tag;
  r.degenerate = std::all_of(p.value.begin(), p.value.end(), [](double v) { return v == 0.0; });
  if (!r.degenerate) {
    r.zeros = bracket_zeros(p.t, p.value);
    r.grazes = find_grazes(p.t, p.value, graze_tol);
  }
  return r;
}

struct ZetaResult {
  SampledProcess process;
  ZeroCrossingRecord record;
};

inline ZetaResult zeta_orthogonal(const BrownianScenario& scn, double a, double eps, double c,
                                  double graze_tol = 1e-9) {
  if (scn.dimension < 1) throw TurbulenceError("empty scenario");
  ZetaResult out;
  const std::size_t n = scn.steps();
  out.process.t.resize(n + 1);
  out.process.value.resize(n + 1);
  const auto& W = scn.W[0];
  const auto& I = scn.intW[0];
  for (std::size_t k = 0; k <= n; ++k) {
    out.process.t[k] = scn.time(k);
    out.process.value[k] = -a * eps * W[k] + eps * eps * W[k] * I[k] - 0.5 * eps * eps * scn.intW2[k] - c;
  }
  out.record = make_record("zeta", out.process, graze_tol);
  out.record.c = c;
  out.record.a = a;
  out.record.epsilon = eps;
  out.record.seed = scn.seed;
  out.record.path = scn.path;
  return out;
}

// ---- d-dimensional zeta ---------------------------------------------------

struct ZetaDdimOptions {
  double lambda_lo = -5, lambda_hi = 5;
  double c = 0;
  double graze_tol = 1e-9;
  int newton_seeds = 21;  ///< per axis, d = 3
};

struct BranchEvent {
  double t = 0;
  int branch = 0;
  bool birth = true;
};

struct ZetaDdimResult {
  SampledProcess process;           ///< one sample per (time, branch)
  std::vector<double> gap_times;    ///< times with no stationary lambda in the window
  std::vector<BranchEvent> events;
  std::vector<ZeroCrossingRecord> records;  ///< per branch
  polyalg::Polynomial stationarity;  ///< numerator of d/dlambda (phi - w a.x_t), in (lambda, t, w), d = 2
};

namespace detail {

inline polyalg::RationalFunction phi_on_caustic(const action::ReducedAction& ra, const geometry::CausticData& cd) {
  polyalg::RationalFunction f(ra.tf, polyalg::var("t"));
  const auto& names = action::eulerian_names();
  for (int i = 0; i < cd.dimension; ++i) f = f.substitute(names[i], cd.preparam[i]);
  f = f.substitute("x0", polyalg::RationalFunction(polyalg::var("lambda")));
  return f;
}

inline polyalg::RationalFunction a_dot_x(const geometry::CausticData& cd, const std::vector<double>& a) {
  polyalg::RationalFunction s;
  for (int i = 0; i < cd.dimension; ++i) {
    if (a[i] != 0.0) s = s + polyalg::RationalFunction(polyalg::Polynomial(polyalg::from_double(a[i]))) * cd.preparam[i];
  }
  return s;
}

}  // namespace detail

/// zeta along the deterministic caustic for noise k = a.x with scalar W (first path component).
inline ZetaDdimResult zeta_ddim(const BrownianScenario& scn, const action::ReducedAction& ra,
                                const geometry::CausticData& cd, double eps, const ZetaDdimOptions& opt = {}) {
  using polyalg::Polynomial;
  using polyalg::RationalFunction;
  const int d = cd.dimension;
  const auto& a = ra.noise.a;
  if (static_cast<int>(a.size()) != d) throw TurbulenceError("noise direction has wrong dimension");
  double a2 = 0.0;
  for (double v : a) a2 += v * v;
  const RationalFunction phi = detail::phi_on_caustic(ra, cd);
  const RationalFunction ax = detail::a_dot_x(cd, a);
  const RationalFunction w(polyalg::var("w"));
  const RationalFunction target = phi - w * ax;  // w = eps W_t
  ZetaDdimResult out;
  auto value = [&](const std::map<std::string, double>& at, double W, double IW, double IW2) {
    return phi.evaluate(at) - eps * W * ax.evaluate(at) + eps * eps * a2 * W * IW - 0.5 * eps * eps * a2 * IW2 - opt.c;
  };
  std::vector<double> prev_roots;
  std::vector<int> prev_ids;
  int next_id = 0;
  std::map<int, SampledProcess> per_branch;
  const std::size_t n = scn.steps();
  if (d == 2) {
    out.stationarity = target.derivative("lambda").numerator();
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = scn.time(k);
      const double W = scn.W[0][k];
      const Polynomial p = out.stationarity.substitute(
          {{"t", Polynomial(polyalg::from_double(t))}, {"w", Polynomial(polyalg::from_double(eps * W))}});
      std::vector<double> roots;
      if (!p.is_zero() && p.has_variable("lambda")) {
        for (double r : geometry::real_roots_in(p, "lambda", {})) {
          if (r >= opt.lambda_lo && r <= opt.lambda_hi) roots.push_back(r);
        }
      }
      // Drop parameters where the caustic is undefined.
      std::vector<double> ok;
      for (double r : roots) {
        const double den = cd.preparam[0].denominator().evaluate(std::map<std::string, double>{{"lambda", r}, {"t", t}});
        if (den != 0.0) ok.push_back(r);
      }
      roots.swap(ok);
      if (roots.empty()) out.gap_times.push_back(t);
      // Continuation on sorted roots: equal counts match in order; a count change by two removes the
      // adjacent pair (a fold) that best preserves the order matching; otherwise nearest neighbour.
      std::vector<int> ids(roots.size(), -1);
      std::vector<bool> used(prev_roots.size(), false);
      auto match_in_order = [&](std::size_t skip_new, std::size_t skip_old) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
          if (i == skip_new || i == skip_new + 1) continue;
          while (j == skip_old || j == skip_old + 1) ++j;
          ids[i] = prev_ids[j];
          used[j] = true;
          ++j;
        }
      };
      const std::size_t none = std::numeric_limits<std::size_t>::max() - 1;
      if (roots.size() == prev_roots.size()) {
        match_in_order(none, none);
      } else if (roots.size() == prev_roots.size() + 2 || prev_roots.size() == roots.size() + 2) {
        const bool born = roots.size() > prev_roots.size();
        const auto& big = born ? roots : prev_roots;
        const auto& small = born ? prev_roots : roots;
        double best = std::numeric_limits<double>::infinity();
        std::size_t bp = 0;
        for (std::size_t p = 0; p + 1 < big.size(); ++p) {
          double cost = 0;
          for (std::size_t i = 0, j = 0; i < big.size(); ++i) {
            if (i == p || i == p + 1) continue;
            cost += std::fabs(big[i] - small[j++]);
          }
          if (cost < best) best = cost, bp = p;
        }
        born ? match_in_order(bp, none) : match_in_order(none, bp);
      } else {
        for (std::size_t i = 0; i < roots.size(); ++i) {
          double best = std::numeric_limits<double>::infinity();
          int bj = -1;
          for (std::size_t j = 0; j < prev_roots.size(); ++j) {
            if (used[j]) continue;
            const double dd = std::fabs(roots[i] - prev_roots[j]);
            if (dd < best) best = dd, bj = static_cast<int>(j);
          }
          if (bj >= 0 && best < 0.05 * (1 + std::fabs(roots[i]))) {
            used[bj] = true;
            ids[i] = prev_ids[bj];
          }
        }
      }
      for (std::size_t j = 0; j < prev_roots.size(); ++j) {
        if (!used[j]) out.events.push_back({t, prev_ids[j], false});
      }
      for (auto& id : ids) {
        if (id < 0) {
          id = next_id++;
          if (k > 1) out.events.push_back({t, id, true});
        }
      }
      for (std::size_t i = 0; i < roots.size(); ++i) {
        const double v = value({{"lambda", roots[i]}, {"t", t}}, W, scn.intW[0][k], scn.intW2[k]);
        out.process.t.push_back(t);
        out.process.value.push_back(v);
        out.process.branch.push_back(ids[i]);
        per_branch[ids[i]].t.push_back(t);
        per_branch[ids[i]].value.push_back(v);
      }
      prev_roots = roots;
      prev_ids = ids;
    }
  } else {
    // d = 3: stationary points in (lambda, lambda2) by Newton from a seed grid.
    const RationalFunction g1 = target.derivative("lambda"), g2 = target.derivative("lambda2");
    const RationalFunction h11 = g1.derivative("lambda"), h12 = g1.derivative("lambda2"), h22 = g2.derivative("lambda2");
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = scn.time(k);
      const double W = scn.W[0][k];
      std::vector<std::pair<double, double>> pts;
      for (int i = 0; i < opt.newton_seeds; ++i) {
        for (int j = 0; j < opt.newton_seeds; ++j) {
          double l1 = opt.lambda_lo + (opt.lambda_hi - opt.lambda_lo) * i / (opt.newton_seeds - 1);
          double l2 = opt.lambda_lo + (opt.lambda_hi - opt.lambda_lo) * j / (opt.newton_seeds - 1);
          bool conv = false;
          for (int it = 0; it < 50; ++it) {
            const std::map<std::string, double> at{{"lambda", l1}, {"lambda2", l2}, {"t", t}, {"w", eps * W}};
            const double f1 = g1.evaluate(at), f2 = g2.evaluate(at);
            const double a11 = h11.evaluate(at), a12 = h12.evaluate(at), a22 = h22.evaluate(at);
            const double det = a11 * a22 - a12 * a12;
            if (!std::isfinite(det) || det == 0) break;
            const double d1 = (f1 * a22 - f2 * a12) / det, d2 = (a11 * f2 - a12 * f1) / det;
            l1 -= d1;
            l2 -= d2;
            if (std::fabs(d1) + std::fabs(d2) < 1e-13 * (1 + std::fabs(l1) + std::fabs(l2))) {
              conv = true;
              break;
            }
          }
          if (!conv || l1 < opt.lambda_lo || l1 > opt.lambda_hi || l2 < opt.lambda_lo || l2 > opt.lambda_hi) continue;
          bool dup = false;
          for (const auto& p : pts) dup = dup || std::fabs(p.first - l1) + std::fabs(p.second - l2) < 1e-8;
          if (!dup) pts.emplace_back(l1, l2);
        }
      }
      std::sort(pts.begin(), pts.end());
      if (pts.empty()) out.gap_times.push_back(t);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = value({{"lambda", pts[i].first}, {"lambda2", pts[i].second}, {"t", t}}, W, scn.intW[0][k],
                               scn.intW2[k]);
        out.process.t.push_back(t);
        out.process.value.push_back(v);
        out.process.branch.push_back(static_cast<int>(i));
        per_branch[static_cast<int>(i)].t.push_back(t);
        per_branch[static_cast<int>(i)].value.push_back(v);
      }
    }
  }
  for (const auto& [id, proc] : per_branch) {
    auto rec = make_record("zeta", proc, opt.graze_tol);
    rec.c = opt.c;
    rec.epsilon = eps;
    rec.seed = scn.seed;
    rec.path = scn.path;
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace burgers::turbulence
