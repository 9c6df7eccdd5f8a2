#pragma once

// Scenario files: flat "key = value" lines, optional [section] headers, '#' comments.
// Lists are comma or whitespace separated. Expectations take the form
//   metric.name = value +- tolerance
// in an [expect] section.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "burgers/action/action.hpp"
#include "burgers/polyalg.hpp"

namespace burgers::cli {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Entry {
  std::string value;
  int line = 0;
};

struct Expectation {
  std::string metric;
  double expected = 0;
  double tolerance = 0;
  int line = 0;
};

struct Scenario {
  std::string source;  ///< file text as read
  std::string path;
  std::map<std::string, std::map<std::string, Entry>> sections;  ///< "" is the top level
  std::vector<Expectation> expectations;
  bool has_expect_block = false;

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  bool has_section(const std::string& s) const { return sections.count(s) > 0; }
};

inline const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> k{
      {"", {"name", "dimension", "S0", "epsilon", "a", "seed", "products", "times", "symbolic_t", "out"}},
      {"window", {"x", "y", "lambda", "samples", "lines"}},
      {"levels", {"c"}},
      {"perestroika", {"t"}},
      {"hotcool", {"delta", "samples"}},
      {"doublepoints", {"a", "eta"}},
      {"zeta", {"a", "epsilon", "c", "T", "h", "paths", "horizons", "delta", "groups", "dump_paths"}},
      {"zeta_ddim", {"epsilon", "c", "T", "h", "lambda"}},
      {"eta", {"T", "h", "epsilon"}},
      {"tolerances", {"hotcool_tie", "hotcool_boundary", "doublepoint_residual", "graze"}},
      {"expect", {}},
  };
  return k;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string at_line(int line, const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; }

inline double to_double(const std::string& s, int line) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ScenarioError(at_line(line, "expected a number, got '" + s + "'"));
  }
  if (pos != s.size()) throw ScenarioError(at_line(line, "expected a number, got '" + s + "'"));
  return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline Scenario parse_scenario(const std::string& text, const std::string& path = "<memory>") {
  Scenario sc;
  sc.source = text;
  sc.path = path;
  sc.sections[""];
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ScenarioError(at_line(line, "unterminated section header"));
      section = trim(l.substr(1, l.size() - 2));
      if (!allowed_keys().count(section)) throw ScenarioError(at_line(line, "unknown section [" + section + "]"));
      if (sc.sections.count(section) && section != "") throw ScenarioError(at_line(line, "duplicate section [" + section + "]"));
      sc.sections[section];
      if (section == "expect") sc.has_expect_block = true;
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ScenarioError(at_line(line, "expected 'key = value'"));
    const std::string key = trim(l.substr(0, eq)), value = trim(l.substr(eq + 1));
    if (key.empty()) throw ScenarioError(at_line(line, "empty key"));
    if (section == "expect") {
      const auto pm = value.find("+-");
      if (pm == std::string::npos) throw ScenarioError(at_line(line, "expectation needs 'value +- tolerance'"));
      Expectation e;
      e.metric = key;
      e.expected = to_double(trim(value.substr(0, pm)), line);
      e.tolerance = to_double(trim(value.substr(pm + 2)), line);
      if (!(e.tolerance >= 0)) throw ScenarioError(at_line(line, "tolerance must be non-negative"));
      e.line = line;
      sc.expectations.push_back(e);
      continue;
    }
    const auto& allowed = allowed_keys().at(section);
    if (!allowed.count(key)) {
      throw ScenarioError(at_line(line, "unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]")));
    }
    auto& sec = sc.sections[section];
    if (sec.count(key)) throw ScenarioError(at_line(line, "duplicate key '" + key + "'"));
    sec[key] = {value, line};
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), path);
}

// ---- typed access ------------------------------------------------------------

inline const std::set<std::string>& known_products() {
  static const std::set<std::string> p{"caustic", "levels",       "maxwell", "premaxwell", "hotcool", "perestroika",
                                       "doublepoints", "zeta", "zeta_ddim", "eta", "stats"};
  return p;
}

struct Window {
  double xlo = -2, xhi = 2, ylo = -2, yhi = 2;
  double llo = -2, lhi = 2;
  int samples = 401;
  int lines = 120;
};

struct ZetaConfig {
  double a = 1, epsilon = 0.5, c = 0, T = 100, h = 1e-3, delta = 1;
  std::size_t paths = 1000;
  std::vector<double> horizons{10, 50, 100};
  int groups = 10;
  std::size_t dump_paths = 1;
};

struct Config {
  std::string name;
  std::string out;  ///< output directory, empty: out/<name>
  action::InitialData data;
  std::uint64_t seed = 0;
  std::vector<std::string> products;
  std::vector<std::string> time_text;  ///< as written
  std::vector<polyalg::Rational> times;
  bool symbolic_t = false;
  Window window;
  std::vector<std::string> level_text;
  std::vector<polyalg::Rational> levels;
  double peres_lo = 0, peres_hi = 0;
  double hotcool_delta = 1e-6;
  int hotcool_samples = 201;
  double dp_alo = -5, dp_ahi = 5, dp_elo = 1e-6, dp_ehi = 5;
  ZetaConfig zeta;
  double ddim_eps = 0.5, ddim_c = 0, ddim_T = 3, ddim_h = 1e-2, ddim_llo = -5, ddim_lhi = 5;
  double eta_T = 3, eta_h = 1e-3, eta_eps = 0;
  std::map<std::string, double> tolerances{
      {"hotcool_tie", 1e-12}, {"hotcool_boundary", 1e-9}, {"doublepoint_residual", 1e-10}, {"graze", 1e-9}};

  bool wants(const std::string& p) const {
    for (const auto& q : products) {
      if (q == p) return true;
    }
    return false;
  }
};

inline polyalg::Rational exact_number(const std::string& s, int line) {
  try {
    const auto p = polyalg::parse_polynomial(s);
    if (!p.is_constant()) throw ScenarioError(at_line(line, "expected an exact number, got '" + s + "'"));
    return p.constant_value();
  } catch (const polyalg::AlgebraError&) {
    return polyalg::from_double(to_double(s, line));
  }
}

/// Validates everything a run needs before any computation starts.
inline Config build_config(const Scenario& sc) {
  Config cfg;
  auto get = [&](const std::string& sec, const std::string& key) { return sc.find(sec, key); };
  auto num = [&](const std::string& sec, const std::string& key, double& out) {
    if (const auto* e = get(sec, key)) out = to_double(e->value, e->line);
  };
  auto range = [&](const std::string& sec, const std::string& key, double& lo, double& hi) {
    if (const auto* e = get(sec, key)) {
      const auto v = split_list(e->value);
      if (v.size() != 2) throw ScenarioError(at_line(e->line, key + " needs two numbers"));
      lo = to_double(v[0], e->line);
      hi = to_double(v[1], e->line);
      if (!(lo < hi)) throw ScenarioError(at_line(e->line, key + " range is empty"));
    }
  };
  const auto* name = get("", "name");
  cfg.name = name ? name->value : "scenario";
  if (const auto* o = get("", "out")) cfg.out = o->value;
  const auto* s0 = get("", "S0");
  if (!s0) throw ScenarioError("missing required key 'S0'");
  try {
    cfg.data.S0 = polyalg::parse_polynomial(s0->value);
  } catch (const polyalg::AlgebraError& e) {
    throw ScenarioError(at_line(s0->line, std::string("cannot parse S0: ") + e.what()));
  }
  double dim = 2;
  num("", "dimension", dim);
  cfg.data.dimension = static_cast<int>(dim);
  num("", "epsilon", cfg.data.epsilon);
  cfg.data.a.assign(cfg.data.dimension, 0.0);
  if (const auto* e = get("", "a")) {
    const auto v = split_list(e->value);
    cfg.data.a.clear();
    for (const auto& x : v) cfg.data.a.push_back(to_double(x, e->line));
  }
  try {
    action::validate(cfg.data);
  } catch (const action::ValidationError& e) {
    throw action::ValidationError(at_line(s0->line, e.what()));
  }
  if (const auto* e = get("", "seed")) {
    try {
      std::size_t pos = 0;
      cfg.seed = std::stoull(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw ScenarioError(at_line(e->line, "seed must be a non-negative integer"));
    }
  }
  if (const auto* e = get("", "products")) {
    for (const auto& p : split_list(e->value)) {
      if (!known_products().count(p)) throw ScenarioError(at_line(e->line, "unknown product '" + p + "'"));
      cfg.products.push_back(p);
    }
  }
  if (const auto* e = get("", "symbolic_t")) {
    if (e->value != "true" && e->value != "false") throw ScenarioError(at_line(e->line, "symbolic_t must be true or false"));
    cfg.symbolic_t = e->value == "true";
  }
  if (const auto* e = get("", "times")) {
    for (const auto& s : split_list(e->value)) {
      const auto t = exact_number(s, e->line);
      if (t <= 0) throw ScenarioError(at_line(e->line, "times must be positive"));
      cfg.times.push_back(t);
      cfg.time_text.push_back(s);
    }
  }
  range("window", "x", cfg.window.xlo, cfg.window.xhi);
  range("window", "y", cfg.window.ylo, cfg.window.yhi);
  range("window", "lambda", cfg.window.llo, cfg.window.lhi);
  double tmp = cfg.window.samples;
  num("window", "samples", tmp);
  cfg.window.samples = static_cast<int>(tmp);
  tmp = cfg.window.lines;
  num("window", "lines", tmp);
  cfg.window.lines = static_cast<int>(tmp);
  if (cfg.window.samples < 2 || cfg.window.lines < 1) throw ScenarioError("window samples must be >= 2 and lines >= 1");
  if (const auto* e = get("levels", "c")) {
    for (const auto& s : split_list(e->value)) {
      cfg.levels.push_back(exact_number(s, e->line));
      cfg.level_text.push_back(s);
    }
  }
  range("perestroika", "t", cfg.peres_lo, cfg.peres_hi);
  num("hotcool", "delta", cfg.hotcool_delta);
  tmp = cfg.hotcool_samples;
  num("hotcool", "samples", tmp);
  cfg.hotcool_samples = static_cast<int>(tmp);
  range("doublepoints", "a", cfg.dp_alo, cfg.dp_ahi);
  range("doublepoints", "eta", cfg.dp_elo, cfg.dp_ehi);
  num("zeta", "a", cfg.zeta.a);
  num("zeta", "epsilon", cfg.zeta.epsilon);
  num("zeta", "c", cfg.zeta.c);
  num("zeta", "T", cfg.zeta.T);
  num("zeta", "h", cfg.zeta.h);
  num("zeta", "delta", cfg.zeta.delta);
  tmp = static_cast<double>(cfg.zeta.paths);
  num("zeta", "paths", tmp);
  cfg.zeta.paths = static_cast<std::size_t>(tmp);
  tmp = cfg.zeta.groups;
  num("zeta", "groups", tmp);
  cfg.zeta.groups = static_cast<int>(tmp);
  tmp = static_cast<double>(cfg.zeta.dump_paths);
  num("zeta", "dump_paths", tmp);
  cfg.zeta.dump_paths = static_cast<std::size_t>(tmp);
  if (const auto* e = get("zeta", "horizons")) {
    cfg.zeta.horizons.clear();
    for (const auto& s : split_list(e->value)) cfg.zeta.horizons.push_back(to_double(s, e->line));
  }
  num("zeta_ddim", "epsilon", cfg.ddim_eps);
  num("zeta_ddim", "c", cfg.ddim_c);
  num("zeta_ddim", "T", cfg.ddim_T);
  num("zeta_ddim", "h", cfg.ddim_h);
  range("zeta_ddim", "lambda", cfg.ddim_llo, cfg.ddim_lhi);
  num("eta", "T", cfg.eta_T);
  num("eta", "h", cfg.eta_h);
  num("eta", "epsilon", cfg.eta_eps);
  for (auto& [k, v] : cfg.tolerances) num("tolerances", k, v);

  // Product preconditions.
  const bool d2 = cfg.data.dimension == 2;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) throw action::ValidationError(msg);
  };
  for (const auto& p : cfg.products) {
    if (p == "levels" || p == "hotcool" || p == "doublepoints") {
      need(!cfg.times.empty(), "product '" + p + "' needs a times list");
    }
    if (p == "caustic" || p == "maxwell" || p == "premaxwell") {
      need(!cfg.times.empty() || cfg.symbolic_t, "product '" + p + "' needs times or symbolic_t = true");
    }
    if (p != "caustic" && p != "zeta" && p != "stats") need(d2, "product '" + p + "' is implemented for dimension 2");
  }
  if (cfg.wants("levels")) need(!cfg.levels.empty(), "product 'levels' needs [levels] c");
  if (cfg.wants("perestroika")) need(cfg.peres_hi > cfg.peres_lo && cfg.peres_lo > 0, "product 'perestroika' needs [perestroika] t = lo hi with lo > 0");
  if (cfg.wants("zeta") || cfg.wants("stats")) {
    need(cfg.zeta.h > 0 && cfg.zeta.T > 0, "zeta needs h > 0 and T > 0");
    need(cfg.zeta.paths >= 1, "zeta needs at least one path");
    if (cfg.wants("stats")) need(cfg.zeta.paths >= 100, "stats needs at least 100 paths");
  }
  if (cfg.wants("zeta_ddim")) {
    need(cfg.ddim_h > 0 && cfg.ddim_T > 0, "zeta_ddim needs h > 0 and T > 0");
    double a2 = 0;
    for (double v : cfg.data.a) a2 += v * v;
    need(a2 > 0, "zeta_ddim needs a nonzero noise direction a");
  }
  if (cfg.wants("eta")) need(cfg.eta_h > 0 && cfg.eta_T > 0, "eta needs h > 0 and T > 0");
  return cfg;
}

}  // namespace burgers::cli
