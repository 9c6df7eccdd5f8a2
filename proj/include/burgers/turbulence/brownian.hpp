#pragma once

// Seeded Brownian paths on a uniform grid with running trapezoid integrals.
// Level L has step h0 / 2^L and is obtained from level L-1 by Brownian-bridge
// midpoint insertion, so refining keeps every coarser sample unchanged.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace burgers::turbulence {

class TurbulenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathKey {
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
};

struct BrownianScenario {
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  double h = 1e-3;  ///< grid step
  double T = 1.0;
  int dimension = 1;
  int level = 0;  ///< refinements applied to the base grid of step h * 2^level
  std::vector<std::vector<double>> W;     ///< W[comp][k] = W_comp(k h)
  std::vector<std::vector<double>> intW;  ///< running trapezoid of W_comp
  std::vector<double> intW2;              ///< running trapezoid of |W|^2

  std::size_t steps() const { return W.empty() ? 0 : W[0].size() - 1; }
  double time(std::size_t k) const { return static_cast<double>(k) * h; }
};

namespace detail {

inline std::mt19937_64 stream(const PathKey& key, int comp, int level) {
  std::seed_seq seq{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32),
                    static_cast<std::uint32_t>(key.path), static_cast<std::uint32_t>(key.path >> 32),
                    static_cast<std::uint32_t>(comp), static_cast<std::uint32_t>(level)};
  return std::mt19937_64(seq);
}

}  // namespace detail

/// Fill running integrals from W (trapezoid rule).
inline void integrate(BrownianScenario& s) {
  const std::size_t n = s.steps();
  s.intW.assign(s.dimension, std::vector<double>(n + 1, 0.0));
  s.intW2.assign(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double sq = 0.0;
    for (int c = 0; c < s.dimension; ++c) {
      const double a = s.W[c][k - 1], b = s.W[c][k];
      s.intW[c][k] = s.intW[c][k - 1] + 0.5 * s.h * (a + b);
      sq += 0.5 * s.h * (a * a + b * b);
    }
    s.intW2[k] = s.intW2[k - 1] + sq;
  }
}

/// Path with base step h_base on [0, T] refined `level` times (step h_base / 2^level).
inline BrownianScenario brownian(const PathKey& key, double T, double h_base, int dimension = 1, int level = 0) {
  if (!(h_base > 0) || !(T > 0)) throw TurbulenceError("Brownian path needs h > 0 and T > 0");
  if (dimension < 1 || dimension > 3) throw TurbulenceError("Brownian path dimension must be 1, 2 or 3");
  if (level < 0) throw TurbulenceError("refinement level must be >= 0");
  const auto n0 = static_cast<std::size_t>(std::ceil(T / h_base - 1e-9));
  BrownianScenario s;
  s.seed = key.seed;
  s.path = key.path;
  s.dimension = dimension;
  s.level = level;
  s.W.assign(dimension, {});
  for (int c = 0; c < dimension; ++c) {
    auto gen = detail::stream(key, c, 0);
    std::normal_distribution<double> z;
    std::vector<double> w(n0 + 1, 0.0);
    const double sd = std::sqrt(h_base);
    for (std::size_t k = 1; k <= n0; ++k) w[k] = w[k - 1] + sd * z(gen);
    double h = h_base;
    for (int l = 1; l <= level; ++l) {
      auto g = detail::stream(key, c, l);
      std::normal_distribution<double> zl;
      std::vector<double> fine(2 * (w.size() - 1) + 1);
      // Bridge midpoint: mean of neighbours, variance h/4.
      const double bsd = std::sqrt(h / 4);
      for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        fine[2 * k] = w[k];
        fine[2 * k + 1] = 0.5 * (w[k] + w[k + 1]) + bsd * zl(g);
      }
      fine.back() = w.back();
      w.swap(fine);
      h /= 2;
    }
    s.W[c] = std::move(w);
  }
  s.h = h_base / std::pow(2.0, level);
  s.T = static_cast<double>(s.steps()) * s.h;
  integrate(s);
  return s;
}

/// Scenario from given samples (test injection, e.g. constant paths).
inline BrownianScenario from_samples(std::vector<std::vector<double>> W, double h) {
  if (W.empty() || W[0].size() < 2) throw TurbulenceError("need at least two samples");
  BrownianScenario s;
  s.dimension = static_cast<int>(W.size());
  s.h = h;
  s.W = std::move(W);
  s.T = static_cast<double>(s.steps()) * h;
  integrate(s);
  return s;
}

}  // namespace burgers::turbulence
