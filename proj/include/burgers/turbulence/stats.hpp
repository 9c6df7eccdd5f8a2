#pragma once

// Ensembles over seeded paths and recurrence statistics of zero sets.

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "burgers/turbulence/zeta.hpp"

namespace burgers::turbulence {

/// Runs fn(path) for path = 0..n-1 on `threads` workers; results ordered by path index.
template <class R>
std::vector<R> parallel_paths(std::size_t n, unsigned threads, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

struct ZetaEnsembleConfig {
  std::uint64_t seed = 0;
  std::size_t paths = 1000;
  double T = 100;
  double h = 1e-3;
  double a = 0, epsilon = 0, c = 0;
  unsigned threads = 1;
};

/// Zero records of the orthogonal zeta process for paths 0..paths-1 (full sampled paths are not kept).
inline std::vector<ZeroCrossingRecord> zeta_ensemble(const ZetaEnsembleConfig& cfg) {
  return parallel_paths<ZeroCrossingRecord>(cfg.paths, cfg.threads, [&](std::size_t i) {
    const auto scn = brownian({cfg.seed, i}, cfg.T, cfg.h);
    return zeta_orthogonal(scn, cfg.a, cfg.epsilon, cfg.c).record;
  });
}

struct HorizonStats {
  double horizon = 0;
  std::size_t paths = 0;
  double frac_ge[3] = {0, 0, 0};  ///< fraction of paths with >= 1, 2, 3 zeros in (delta, horizon]
  double se_ge[3] = {0, 0, 0};    ///< binomial standard errors
  double mean_gap = 0;            ///< mean spacing of consecutive zeros (paths with >= 2 zeros)
  std::size_t gap_count = 0;
  bool degenerate = false;        ///< all records identically zero
};

struct ExchangeabilityTest {
  int groups = 0;
  double chi2 = 0;
  int dof = 0;
  double p_value = 1;
};

struct RecurrenceTable {
  double delta = 0;
  std::vector<HorizonStats> rows;
  ExchangeabilityTest exchangeability;  ///< at the largest horizon
};

inline std::size_t zeros_in(const ZeroCrossingRecord& r, double delta, double horizon, std::vector<double>* times = nullptr) {
  std::size_t n = 0;
  for (const auto& z : r.zeros) {
    if (z.time > delta && z.time <= horizon) {
      ++n;
      if (times) times->push_back(z.time);
    }
  }
  return n;
}

/// Pearson chi-square homogeneity of zero presence across `groups` consecutive blocks of records.
inline ExchangeabilityTest exchangeability(const std::vector<ZeroCrossingRecord>& recs, double delta, double horizon,
                                           int groups) {
  ExchangeabilityTest out;
  out.groups = groups;
  if (groups < 2 || recs.size() < static_cast<std::size_t>(groups)) return out;
  std::vector<double> hit(groups, 0), tot(groups, 0);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const int g = static_cast<int>(i * groups / recs.size());
    tot[g] += 1;
    hit[g] += zeros_in(recs[i], delta, horizon) > 0 ? 1 : 0;
  }
  double H = 0, N = 0;
  for (int g = 0; g < groups; ++g) H += hit[g], N += tot[g];
  const double p = H / N;
  if (p == 0 || p == 1) return out;  // no variation: homogeneous by construction
  for (int g = 0; g < groups; ++g) {
    const double e1 = tot[g] * p, e0 = tot[g] * (1 - p);
    out.chi2 += (hit[g] - e1) * (hit[g] - e1) / e1 + ((tot[g] - hit[g]) - e0) * ((tot[g] - hit[g]) - e0) / e0;
  }
  out.dof = groups - 1;
  out.p_value = boost::math::gamma_q(0.5 * out.dof, 0.5 * out.chi2);
  return out;
}

inline RecurrenceTable recurrence_stats(const std::vector<ZeroCrossingRecord>& recs, const std::vector<double>& horizons,
                                        double delta = 1.0, int groups = 10) {
  RecurrenceTable tab;
  tab.delta = delta;
  const bool degenerate = !recs.empty() && std::all_of(recs.begin(), recs.end(), [](const auto& r) { return r.degenerate; });
  for (double H : horizons) {
    HorizonStats row;
    row.horizon = H;
    row.paths = recs.size();
    row.degenerate = degenerate;
    double gap_sum = 0;
    std::size_t cnt[3] = {0, 0, 0};
    for (const auto& r : recs) {
      std::vector<double> ts;
      const std::size_t n = zeros_in(r, delta, H, &ts);
      for (int k = 0; k < 3; ++k) cnt[k] += n >= static_cast<std::size_t>(k + 1);
      for (std::size_t i = 1; i < ts.size(); ++i) gap_sum += ts[i] - ts[i - 1], ++row.gap_count;
    }
    const double N = static_cast<double>(recs.size());
    for (int k = 0; k < 3; ++k) {
      row.frac_ge[k] = N > 0 ? cnt[k] / N : 0;
      row.se_ge[k] = N > 0 ? std::sqrt(row.frac_ge[k] * (1 - row.frac_ge[k]) / N) : 0;
    }
    row.mean_gap = row.gap_count ? gap_sum / row.gap_count : 0;
    tab.rows.push_back(row);
  }
  if (!horizons.empty()) {
    tab.exchangeability = exchangeability(recs, delta, *std::max_element(horizons.begin(), horizons.end()), groups);
  }
  return tab;
}

/// Monte-Carlo mean and standard error of zeta(t) + c at grid index k.
struct MeanEstimate {
  double mean = 0, se = 0;
  std::size_t n = 0;
};

inline MeanEstimate zeta_mean(std::uint64_t seed, std::size_t paths, double t, double h, double a, double eps,
                              unsigned threads = 1) {
  const auto vals = parallel_paths<double>(paths, threads, [&](std::size_t i) {
    const auto scn = brownian({seed, i}, t, h);
    const auto z = zeta_orthogonal(scn, a, eps, 0.0);
    return z.process.value.back();
  });
  MeanEstimate m;
  m.n = vals.size();
  double s = 0, s2 = 0;
  for (double v : vals) s += v, s2 += v * v;
  m.mean = s / m.n;
  m.se = std::sqrt(std::max(0.0, s2 / m.n - m.mean * m.mean) / (m.n - 1));
  return m;
}

}  // namespace burgers::turbulence
