#pragma once

// run / verify: computes the requested products of a scenario and writes
// CSV, SVG (from the CSV) and JSON artifacts plus a manifest.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "burgers/cli/scenario.hpp"
#include "burgers/cli/svg.hpp"
#include "burgers/geometry.hpp"
#include "burgers/turbulence.hpp"

namespace burgers::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kValidation = 3, kComputation = 4 };

struct RunOptions {
  std::string out;                     ///< overrides the scenario's output directory
  std::optional<std::uint64_t> seed;   ///< overrides the scenario seed
  unsigned threads = 1;
  bool tol_report = false;
};

struct CheckResult {
  std::string metric;
  double observed = 0, expected = 0, tolerance = 0;
  bool present = false, pass = false;
};

struct RunResult {
  fs::path dir;
  std::map<std::string, double> metrics;
  std::vector<std::string> files;
  double wall_seconds = 0;
};

inline std::string num(double v) {
  if (v == 0) v = 0;  // no negative zero in output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short form for console lines.
inline std::string show(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string file_token(const std::string& s) {
  std::string o;
  for (char ch : s) o.push_back(ch == '/' ? '_' : ch);
  return o;
}

class Writer {
 public:
  Writer(fs::path dir, std::string header) : dir_(std::move(dir)), header_(std::move(header)) {}

  void text(const std::string& name, const std::string& body) {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << body;
    files_.insert(name);
  }
  void csv(const std::string& name, const std::vector<std::string>& cols, const std::vector<std::vector<std::string>>& rows,
           const std::string& meta = "") {
    std::ostringstream s;
    s << header_ << meta;
    for (std::size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << cols[i];
    s << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
      s << '\n';
    }
    text(name, s.str());
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  const std::set<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::string header_;
  std::set<std::string> files_;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

inline bool finite_point(const std::vector<double>& p) {
  for (double v : p) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// x_t(lambda) with exact evaluation at the dyadic lambda; empty where undefined.
inline std::vector<double> exact_point(const geometry::CausticData& cd, double lambda, const polyalg::Rational& t) {
  const std::map<std::string, polyalg::Rational> at{{"lambda", polyalg::from_double(lambda)}, {"t", t}};
  std::vector<double> out;
  for (const auto& r : cd.preparam) {
    const auto den = r.denominator().evaluate(at);
    if (den == 0) return {};
    out.push_back(polyalg::Rational(r.numerator().evaluate(at) / den).get_d());
  }
  return out;
}

struct Picture {
  std::string ts;
  std::vector<std::string> caustic, maxwell, levels;
};

}  // namespace detail

/// Computes every requested product; throws on computation failure.
inline RunResult run(const Scenario& sc, const Config& cfg, const RunOptions& opt) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult res;
  res.dir = !opt.out.empty() ? fs::path(opt.out) : !cfg.out.empty() ? fs::path(cfg.out) : fs::path("out") / cfg.name;
  fs::create_directories(res.dir);
  const std::uint64_t seed = opt.seed.value_or(cfg.seed);
  Writer w(res.dir, "# scenario=" + cfg.name + " seed=" + std::to_string(seed) + "\n");
  auto& M = res.metrics;
  const auto& win = cfg.window;
  std::map<std::string, detail::Picture> pictures;
  for (const auto& ts : cfg.time_text) pictures[ts].ts = ts;

  std::optional<action::ReducedAction> ra;
  std::optional<geometry::CausticData> cd;
  const bool needs_geometry = cfg.wants("caustic") || cfg.wants("levels") || cfg.wants("maxwell") ||
                              cfg.wants("premaxwell") || cfg.wants("hotcool") || cfg.wants("perestroika") ||
                              cfg.wants("doublepoints") || cfg.wants("zeta_ddim") || cfg.wants("eta");
  if (needs_geometry) {
    ra = action::build_reduced_action(cfg.data);
    // The Eulerian equation is only eliminated when a product uses it.
    geometry::CausticOptions co;
    co.equation = cfg.wants("caustic") || cfg.wants("maxwell");
    cd = geometry::compute_caustic(*ra, co);
  }

  if (cfg.wants("caustic")) {
    json j;
    j["equation"] = polyalg::to_text(*cd->equation);
    std::vector<std::string> names{"x", "y", "z"};
    for (std::size_t i = 0; i < cd->preparam.size(); ++i) {
      j["preparam"][names[i]] = {{"numerator", polyalg::to_text(cd->preparam[i].numerator())},
                                 {"denominator", polyalg::to_text(cd->preparam[i].denominator())}};
    }
    if (cd->dimension == 2) j["cusp_condition"] = polyalg::to_text(cd->cusp_condition);
    w.json_file("caustic.json", j);
    if (cd->dimension == 2) {
      for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const auto& t = cfg.times[k];
        const auto& ts = cfg.time_text[k];
        std::vector<std::vector<std::string>> rows;
        for (double l : detail::linspace(win.llo, win.lhi, win.samples)) {
          const auto p = detail::exact_point(*cd, l, t);
          if (p.empty()) continue;
          rows.push_back({num(l), num(p[0]), num(p[1])});
        }
        const std::string f = "caustic_t" + file_token(ts) + ".csv";
        w.csv(f, {"lambda", "x", "y"}, rows);
        pictures[ts].caustic.push_back(f);
        std::vector<std::vector<std::string>> cusps;
        for (double l : cd->cusp_params(t)) {
          const auto p = cd->point(l, t.get_d());
          if (detail::finite_point(p)) cusps.push_back({num(l), num(p[0]), num(p[1])});
        }
        w.csv("caustic_cusps_t" + file_token(ts) + ".csv", {"lambda", "x", "y"}, cusps);
        M["caustic.cusps@" + ts] = static_cast<double>(cusps.size());
      }
    }
  }

  if (cfg.wants("levels")) {
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
      for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
        const auto L = geometry::level_surface(*ra, cfg.levels[i], cfg.times[k]);
        const auto pts = geometry::sample_curve(L, cfg.times[k], win.xlo, win.xhi, win.ylo, win.yhi, win.lines);
        std::vector<std::vector<std::string>> rows;
        for (const auto& [x, y] : pts) rows.push_back({num(x), num(y)});
        const std::string f = "level_t" + file_token(cfg.time_text[k]) + "_c" + file_token(cfg.level_text[i]) + ".csv";
        w.csv(f, {"x", "y"}, rows);
        w.text("level_t" + file_token(cfg.time_text[k]) + "_c" + file_token(cfg.level_text[i]) + ".txt",
               polyalg::to_text(L) + "\n");
        pictures[cfg.time_text[k]].levels.push_back(f);
        M["levels.points@" + cfg.time_text[k] + "," + cfg.level_text[i]] = static_cast<double>(pts.size());
      }
    }
  }

  if (cfg.wants("maxwell")) {
    const auto mk = geometry::maxwell_klein(*ra, *cd->equation);
    json j;
    j["B"] = polyalg::to_text(mk.B);
    j["C"] = polyalg::to_text(mk.C);
    j["c_exponent"] = mk.c_exponent;
    j["b_exponent"] = mk.b_exponent;
    j["constant"] = polyalg::to_text(mk.constant);
    j["B_terms"] = mk.B.terms().size();
    w.json_file("maxwell.json", j);
    w.text("maxwell_B.txt", polyalg::to_text(mk.B) + "\n");
    M["maxwell.c_exponent"] = mk.c_exponent;
    M["maxwell.b_exponent"] = mk.b_exponent;
    M["maxwell.B_terms"] = static_cast<double>(mk.B.terms().size());
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
      const double t = cfg.times[k].get_d();
      std::vector<std::vector<std::string>> rows;
      int crunodes = 0;
      if (mk.B.has_variable("x") || mk.B.has_variable("y")) {
        for (const auto& [x, y] : geometry::sample_curve(mk.B, cfg.times[k], win.xlo, win.xhi, win.ylo, win.yhi, win.lines)) {
          const auto bp = geometry::classify_b_point(*ra, x, y, t);
          const bool cr = bp.kind == geometry::DoublePointKind::Crunode;
          crunodes += cr;
          rows.push_back({num(x), num(y), cr ? "crunode" : "acnode"});
        }
      }
      const std::string f = "maxwell_t" + file_token(cfg.time_text[k]) + ".csv";
      w.csv(f, {"x", "y", "kind"}, rows);
      pictures[cfg.time_text[k]].maxwell.push_back(f);
      M["maxwell.crunodes@" + cfg.time_text[k]] = crunodes;
    }
  }

  if (cfg.wants("premaxwell")) {
    const auto pm = geometry::pre_maxwell(*ra);
    json j;
    j["pre_maxwell"] = polyalg::to_text(pm.pre_maxwell);
    j["pre_caustic"] = polyalg::to_text(pm.pre_caustic);
    j["precaustic_exponent"] = pm.precaustic_exponent;
    w.json_file("premaxwell.json", j);
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
      std::vector<std::vector<std::string>> rows;
      int cusps = 0;
      for (const auto& c : geometry::premaxwell_precaustic_points(*ra, pm, cfg.times[k])) {
        rows.push_back({num(c.x0), num(c.y0), num(c.x[0]), num(c.x[1]), std::to_string(c.multiplicity)});
        cusps += c.multiplicity == 1;
      }
      w.csv("premaxwell_points_t" + file_token(cfg.time_text[k]) + ".csv", {"x0", "y0", "x", "y", "multiplicity"}, rows);
      M["premaxwell.maxwell_cusps@" + cfg.time_text[k]] = cusps;
    }
  }

  if (cfg.wants("hotcool")) {
    const auto sym = geometry::hot_cool_symbolic(*ra, *cd);
    w.json_file("hotcool.json", {{"F", polyalg::to_text(sym.F)},
                                 {"G", polyalg::to_text(sym.G)},
                                 {"discF", polyalg::to_text(sym.discF)},
                                 {"discG", polyalg::to_text(sym.discG)}});
    geometry::HotCoolOptions ho;
    ho.tie_tolerance = cfg.tolerances.at("hotcool_tie");
    ho.boundary_tolerance = cfg.tolerances.at("hotcool_boundary");
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
      const auto& ts = cfg.time_text[k];
      std::vector<std::vector<std::string>> rows;
      std::map<char, int> seen;
      for (const auto& b : geometry::hot_cool_boundaries(*ra, *cd, sym, cfg.times[k], cfg.hotcool_delta)) {
        rows.push_back({num(b.lambda), num(b.point[0]), num(b.point[1]), std::string(1, b.source), b.label_change ? "1" : "0"});
        if (!b.label_change) continue;
        const std::string key = std::string("hotcool.") + b.source + (seen[b.source]++ ? std::to_string(seen[b.source]) : "");
        M[key + ".lambda@" + ts] = b.lambda;
        M[key + ".x@" + ts] = b.point[0];
        M[key + ".y@" + ts] = b.point[1];
      }
      w.csv("hotcool_boundaries_t" + file_token(ts) + ".csv", {"lambda", "x", "y", "source", "label_change"}, rows);
      std::vector<std::vector<std::string>> labels;
      int hot = 0;
      for (double l : detail::linspace(win.llo, win.lhi, cfg.hotcool_samples)) {
        geometry::HotCoolLabel hl;
        try {
          hl = geometry::hot_cool(*ra, *cd, sym, l, cfg.times[k], ho);
        } catch (const geometry::GeometryError&) {
          continue;  // caustic undefined at this parameter
        }
        hot += hl.label == geometry::Temperature::Hot;
        labels.push_back({num(l), num(hl.point[0]), num(hl.point[1]), geometry::to_string(hl.label), hl.tie ? "1" : "0",
                          hl.boundary_flag ? "1" : "0"});
      }
      w.csv("hotcool_labels_t" + file_token(ts) + ".csv", {"lambda", "x", "y", "label", "tie", "near_boundary"}, labels);
      M["hotcool.hot_samples@" + ts] = hot;
    }
  }

  if (cfg.wants("perestroika")) {
    const auto sys = geometry::perestroika_system(*ra, *cd);
    w.json_file("perestroika.json",
                {{"N3", polyalg::to_text(sys.N3)}, {"N4", polyalg::to_text(sys.N4)}, {"R", polyalg::to_text(sys.R)}});
    const auto ev = geometry::perestroika_detect(*ra, *cd, cfg.peres_lo, cfg.peres_hi);
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : ev) {
      rows.push_back({num(e.t), num(e.lambda), num(e.x[0]), num(e.x[1]), num(e.dx_dlambda), num(e.d2x_dlambda2),
                      num(e.certificate_det), e.certificate ? "1" : "0"});
    }
    w.csv("perestroika.csv", {"t", "lambda", "x", "y", "dx_dlambda", "d2x_dlambda2", "certificate_det", "certified"}, rows);
    M["perestroika.count"] = static_cast<double>(ev.size());
    if (!ev.empty()) {
      M["perestroika.t"] = ev[0].t;
      M["perestroika.lambda"] = ev[0].lambda;
      M["perestroika.x"] = ev[0].x[0];
      M["perestroika.y"] = ev[0].x[1];
      M["perestroika.dx_dlambda"] = ev[0].dx_dlambda;
      M["perestroika.d2x_dlambda2"] = ev[0].d2x_dlambda2;
    }
  }

  if (cfg.wants("doublepoints")) {
    geometry::DoublePointOptions dpo;
    dpo.a_lo = cfg.dp_alo;
    dpo.a_hi = cfg.dp_ahi;
    dpo.eta_lo = cfg.dp_elo;
    dpo.eta_hi = cfg.dp_ehi;
    dpo.residual = cfg.tolerances.at("doublepoint_residual");
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
      const auto dps = geometry::complex_double_points(*cd, cfg.times[k], dpo);
      std::vector<std::vector<std::string>> rows;
      double min_eta = std::numeric_limits<double>::infinity();
      for (const auto& d : dps) {
        rows.push_back({num(d.a), num(d.eta), d.near_window_edge ? "1" : "0"});
        min_eta = std::min(min_eta, d.eta);
      }
      w.csv("doublepoints_t" + file_token(cfg.time_text[k]) + ".csv", {"a", "eta", "near_window_edge"}, rows);
      M["doublepoints.count@" + cfg.time_text[k]] = static_cast<double>(dps.size());
      if (!dps.empty()) M["doublepoints.min_eta@" + cfg.time_text[k]] = min_eta;
    }
  }

  if (cfg.wants("zeta") || cfg.wants("stats")) {
    const auto& z = cfg.zeta;
    const std::string meta = "# h=" + num(z.h) + "\n";
    for (std::size_t p = 0; p < std::min(z.dump_paths, z.paths); ++p) {
      const auto scn = turbulence::brownian({seed, p}, z.T, z.h);
      const auto zr = turbulence::zeta_orthogonal(scn, z.a, z.epsilon, z.c, cfg.tolerances.at("graze"));
      std::vector<std::vector<std::string>> path_rows, proc_rows;
      for (std::size_t k = 0; k <= scn.steps(); ++k) {
        path_rows.push_back({num(scn.time(k)), num(scn.W[0][k]), num(scn.intW[0][k]), num(scn.intW2[k])});
        proc_rows.push_back({num(zr.process.t[k]), num(zr.process.value[k]), "-1"});
      }
      w.csv("zeta_path_" + std::to_string(p) + ".csv", {"t", "W_1", "intW_1", "intW2"}, path_rows, meta);
      w.csv("zeta_process_" + std::to_string(p) + ".csv", {"t", "value", "branch_id"}, proc_rows, meta);
    }
    turbulence::ZetaEnsembleConfig ec;
    ec.seed = seed;
    ec.paths = z.paths;
    ec.T = z.T;
    ec.h = z.h;
    ec.a = z.a;
    ec.epsilon = z.epsilon;
    ec.c = z.c;
    ec.threads = opt.threads;
    const auto recs = turbulence::zeta_ensemble(ec);
    std::vector<std::vector<std::string>> rec_rows;
    for (const auto& r : recs) {
      rec_rows.push_back({std::to_string(r.path), std::to_string(r.zeros.size()), std::to_string(r.grazes.size()),
                          r.zeros.empty() ? "" : num(r.zeros.front().time), r.zeros.empty() ? "" : num(r.zeros.back().time),
                          r.degenerate ? "1" : "0"});
    }
    w.csv("zeta_records.csv", {"path", "zeros", "grazes", "first_zero", "last_zero", "degenerate"}, rec_rows, meta);
    if (cfg.wants("stats")) {
      const auto tab = turbulence::recurrence_stats(recs, z.horizons, z.delta, z.groups);
      std::vector<std::vector<std::string>> rows;
      json j;
      j["seed"] = seed;
      j["h"] = z.h;
      j["paths"] = z.paths;
      j["delta"] = z.delta;
      for (const auto& r : tab.rows) {
        rows.push_back({num(r.horizon), std::to_string(r.paths), num(r.frac_ge[0]), num(r.se_ge[0]), num(r.frac_ge[1]),
                        num(r.se_ge[1]), num(r.frac_ge[2]), num(r.se_ge[2]), num(r.mean_gap), std::to_string(r.gap_count)});
        j["rows"].push_back({{"horizon", r.horizon},
                             {"frac_ge", {r.frac_ge[0], r.frac_ge[1], r.frac_ge[2]}},
                             {"se", {r.se_ge[0], r.se_ge[1], r.se_ge[2]}},
                             {"mean_gap", r.mean_gap},
                             {"gap_count", r.gap_count},
                             {"degenerate", r.degenerate}});
        for (int q = 0; q < 3; ++q) M["stats.frac_ge" + std::to_string(q + 1) + "@" + num(r.horizon)] = r.frac_ge[q];
      }
      j["exchangeability"] = {{"groups", tab.exchangeability.groups},
                              {"chi2", tab.exchangeability.chi2},
                              {"dof", tab.exchangeability.dof},
                              {"p_value", tab.exchangeability.p_value}};
      M["stats.exchangeability_p"] = tab.exchangeability.p_value;
      w.csv("stats.csv", {"horizon", "paths", "frac_ge1", "se1", "frac_ge2", "se2", "frac_ge3", "se3", "mean_gap", "gap_count"},
             rows, meta);
      w.json_file("stats.json", j);
    }
  }

  if (cfg.wants("zeta_ddim")) {
    const auto scn = turbulence::brownian({seed, 0}, cfg.ddim_T, cfg.ddim_h);
    turbulence::ZetaDdimOptions zo;
    zo.lambda_lo = cfg.ddim_llo;
    zo.lambda_hi = cfg.ddim_lhi;
    zo.c = cfg.ddim_c;
    zo.graze_tol = cfg.tolerances.at("graze");
    const auto zd = turbulence::zeta_ddim(scn, *ra, *cd, cfg.ddim_eps, zo);
    const std::string meta = "# h=" + num(cfg.ddim_h) + "\n";
    std::vector<std::vector<std::string>> rows, ev;
    for (std::size_t i = 0; i < zd.process.t.size(); ++i) {
      rows.push_back({num(zd.process.t[i]), num(zd.process.value[i]), std::to_string(zd.process.branch[i])});
    }
    for (const auto& e : zd.events) ev.push_back({num(e.t), std::to_string(e.branch), e.birth ? "birth" : "death"});
    w.csv("zeta_ddim_process.csv", {"t", "value", "branch_id"}, rows, meta);
    w.csv("zeta_ddim_events.csv", {"t", "branch_id", "event"}, ev, meta);
    M["zeta_ddim.branches"] = static_cast<double>(zd.records.size());
    M["zeta_ddim.gap_times"] = static_cast<double>(zd.gap_times.size());
  }

  if (cfg.wants("eta")) {
    const auto scn = turbulence::brownian({seed, 0}, cfg.eta_T, cfg.eta_h);
    const auto er = turbulence::eta_process(*ra, *cd, scn, cfg.eta_eps);
    const std::string meta = "# h=" + num(cfg.eta_h) + "\n";
    std::vector<std::vector<std::string>> rows, zr;
    for (std::size_t i = 0; i < er.process.t.size(); ++i) {
      rows.push_back({num(er.process.t[i]), num(er.process.value[i]), num(er.signed_value[i]), "-1"});
    }
    for (const auto& z : er.record.zeros) zr.push_back({num(z.lo), num(z.hi), num(z.time)});
    w.csv("eta_process.csv", {"t", "value", "signed_value", "branch_id"}, rows, meta);
    w.csv("eta_zeros.csv", {"lo", "hi", "time"}, zr, meta);
    M["eta.zeros"] = static_cast<double>(er.record.zeros.size());
    if (!er.record.zeros.empty()) M["eta.zero1"] = er.record.zeros.front().time;
  }

  // ---- SVG from the CSV files -------------------------------------------------
  for (const auto& [ts, pic] : pictures) {
    if (pic.caustic.empty() && pic.maxwell.empty() && pic.levels.empty()) continue;
    std::vector<Layer> layers;
    const double gap = 0.08 * std::max(win.xhi - win.xlo, win.yhi - win.ylo);
    for (const auto& f : pic.levels) {
      const auto t = read_csv((res.dir / f).string());
      const auto xs = t.numbers("x"), ys = t.numbers("y");
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], ys[i]);
      layers.push_back({chain_points(pts, gap / 2), Dash::Short, "#1f77b4", layers.empty() ? "level" : ""});
    }
    for (const auto& f : pic.maxwell) {
      const auto t = read_csv((res.dir / f).string());
      const int kc = t.column("kind");
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : t.rows) {
        if (r[kc] == "crunode") pts.emplace_back(std::stod(r[0]), std::stod(r[1]));
      }
      layers.push_back({chain_points(pts, gap / 2), Dash::Solid, "#d62728", "Maxwell"});
    }
    for (const auto& f : pic.caustic) {
      const auto t = read_csv((res.dir / f).string());
      layers.push_back({split_ordered(t.numbers("x"), t.numbers("y"), gap), Dash::Long, "black", "caustic"});
    }
    w.text("plot_t" + file_token(ts) + ".svg",
           render_svg(layers, win.xlo, win.xhi, win.ylo, win.yhi, cfg.name + ", t = " + ts, "x", "y"));
  }
  for (const std::string stem : {"zeta_process_0", "zeta_ddim_process", "eta_process"}) {
    if (!w.files().count(stem + ".csv")) continue;
    const auto t = read_csv((res.dir / (stem + ".csv")).string());
    const auto ts = t.numbers("t"), vs = t.numbers("value"), br = t.numbers("branch_id");
    std::map<int, std::vector<std::pair<double, double>>> by_branch;
    double lo = 0, hi = 0;
    // Long single-branch records are thinned for drawing; the CSV keeps every sample.
    const std::size_t stride = std::max<std::size_t>(1, ts.size() / 20000);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i % stride && i + 1 != ts.size()) continue;
      by_branch[static_cast<int>(br[i])].emplace_back(ts[i], vs[i]);
      lo = std::min(lo, vs[i]);
      hi = std::max(hi, vs[i]);
    }
    if (hi == lo) hi = lo + 1;
    std::vector<Layer> layers;
    layers.push_back({{{{ts.empty() ? 0 : ts.front(), 0.0}, {ts.empty() ? 1 : ts.back(), 0.0}}}, Dash::Short, "#888", ""});
    for (const auto& [b, pts] : by_branch) layers.push_back({{pts}, Dash::Solid, "black", ""});
    const double tmax = ts.empty() ? 1 : ts.back();
    w.text(stem + ".svg", render_svg(layers, 0, tmax, lo, hi, cfg.name + ": " + stem, "t", "value"));
  }

  json metrics(json::object());
  for (const auto& [k, v] : M) metrics[k] = v;
  w.json_file("metrics.json", metrics);

  json man;
  man["name"] = cfg.name;
  man["version"] = kVersion;
  man["scenario"] = fs::path(sc.path).filename().string();
  man["inputs"] = sc.source;
  man["seed"] = seed;
  man["products"] = cfg.products;
  man["times"] = cfg.time_text;
  json tol(json::object());
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  man["tolerances"] = tol;
  if (cfg.wants("zeta") || cfg.wants("stats")) man["zeta"] = {{"h", cfg.zeta.h}, {"T", cfg.zeta.T}, {"paths", cfg.zeta.paths}};
  if (cfg.wants("eta")) man["eta"] = {{"h", cfg.eta_h}, {"T", cfg.eta_T}};
  if (cfg.wants("zeta_ddim")) man["zeta_ddim"] = {{"h", cfg.ddim_h}, {"T", cfg.ddim_T}};
  std::vector<std::string> files(w.files().begin(), w.files().end());
  files.push_back("manifest.json");
  files.push_back("timing.txt");
  std::sort(files.begin(), files.end());
  man["files"] = files;
  w.json_file("manifest.json", man);

  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  {
    std::ofstream f(res.dir / "timing.txt");
    f << "wall_seconds " << num(res.wall_seconds) << '\n';
  }
  res.files = files;
  return res;
}

inline std::vector<CheckResult> compare(const Scenario& sc, const std::map<std::string, double>& metrics) {
  std::vector<CheckResult> out;
  for (const auto& e : sc.expectations) {
    CheckResult c;
    c.metric = e.metric;
    c.expected = e.expected;
    c.tolerance = e.tolerance;
    auto it = metrics.find(e.metric);
    c.present = it != metrics.end();
    if (c.present) {
      c.observed = it->second;
      c.pass = std::fabs(c.observed - c.expected) <= c.tolerance;
    }
    out.push_back(c);
  }
  return out;
}

inline json verify_report(const Scenario& sc, const std::vector<CheckResult>& checks) {
  json j;
  j["scenario"] = fs::path(sc.path).filename().string();
  bool all = true;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json e{{"metric", c.metric}, {"expected", c.expected}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    e["observed"] = c.present ? json(c.observed) : json(nullptr);
    j["checks"].push_back(e);
    all = all && c.pass;
  }
  j["pass"] = all;
  return j;
}

/// Entry point shared by the binary and tests; returns the process exit code.
inline int execute(const std::string& command, const std::string& file, const RunOptions& opt, std::ostream& out,
                   std::ostream& err) {
  Scenario sc;
  Config cfg;
  try {
    sc = load_scenario(file);
    if (command == "verify" && !sc.has_expect_block) throw ScenarioError("scenario has no [expect] block");
    cfg = build_config(sc);
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << '\n';
    return kUsage;
  } catch (const action::ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  }
  RunResult res;
  try {
    res = run(sc, cfg, opt);
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return kComputation;
  }
  if (opt.tol_report) {
    out << "tolerances in effect:\n";
    for (const auto& [k, v] : cfg.tolerances) out << "  " << k << " = " << show(v) << '\n';
  }
  if (command == "run") {
    out << "wrote " << res.files.size() << " files to " << res.dir.string() << '\n';
    return kOk;
  }
  const auto checks = compare(sc, res.metrics);
  const auto rep = verify_report(sc, checks);
  {
    std::ofstream f(res.dir / "verify_report.json", std::ios::binary);
    f << rep.dump(2) << '\n';
  }
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.metric << " observed=" << (c.present ? show(c.observed) : "missing")
        << " expected=" << show(c.expected) << " tol=" << show(c.tolerance);
    if (opt.tol_report && c.present) out << " |diff|=" << show(std::fabs(c.observed - c.expected));
    out << '\n';
  }
  return rep["pass"].get<bool>() ? kOk : kCheckFailed;
}

}  // namespace burgers::cli
