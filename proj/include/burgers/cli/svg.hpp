#pragma once

// SVG plots rendered from CSV files already on disk.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace burgers::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
  std::vector<double> numbers(const std::string& name) const {
    const int c = column(name);
    std::vector<double> out;
    if (c < 0) return out;
    for (const auto& r : rows) out.push_back(std::stod(r[c]));
    return out;
  }
};

/// Reads a CSV written by this tool: '#' lines are metadata, first other line is the header.
inline CsvTable read_csv(const std::string& path) {
  CsvTable t;
  std::ifstream f(path);
  std::string line;
  bool have_header = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.header = cells;
      have_header = true;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

enum class Dash { Solid, Long, Short };

struct Layer {
  std::vector<std::vector<std::pair<double, double>>> polylines;
  Dash dash = Dash::Solid;
  std::string colour = "black";
  std::string label;
};

/// Chains unordered samples into polylines by nearest unvisited neighbour within `gap`.
inline std::vector<std::vector<std::pair<double, double>>> chain_points(std::vector<std::pair<double, double>> pts,
                                                                        double gap) {
  std::vector<std::vector<std::pair<double, double>>> out;
  std::vector<bool> used(pts.size(), false);
  std::sort(pts.begin(), pts.end());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (used[s]) continue;
    std::vector<std::pair<double, double>> line{pts[s]};
    used[s] = true;
    std::size_t cur = s;
    for (;;) {
      double best = gap;
      std::size_t bi = pts.size();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (used[j]) continue;
        const double d = std::hypot(pts[j].first - pts[cur].first, pts[j].second - pts[cur].second);
        if (d < best) best = d, bi = j;
      }
      if (bi == pts.size()) break;
      used[bi] = true;
      line.push_back(pts[bi]);
      cur = bi;
    }
    out.push_back(std::move(line));
  }
  return out;
}

/// Splits an ordered sample sequence wherever consecutive points are farther apart than `gap`.
inline std::vector<std::vector<std::pair<double, double>>> split_ordered(const std::vector<double>& x,
                                                                         const std::vector<double>& y, double gap) {
  std::vector<std::vector<std::pair<double, double>>> out(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!out.back().empty() && std::hypot(x[i] - out.back().back().first, y[i] - out.back().back().second) > gap) {
      out.emplace_back();
    }
    out.back().emplace_back(x[i], y[i]);
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

inline std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string render_svg(const std::vector<Layer>& layers, double xlo, double xhi, double ylo, double yhi,
                              const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  const double W = 640, H = 640, m = 50;
  auto px = [&](double x) { return m + (x - xlo) / (xhi - xlo) * (W - 2 * m); };
  auto py = [&](double y) { return H - m - (y - ylo) / (yhi - ylo) * (H - 2 * m); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  s << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m << "\" height=\"" << H - 2 * m
    << "\" fill=\"none\" stroke=\"#888\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << " ["
    << svg_number(xlo) << ", " << svg_number(xhi) << "]</text>\n";
  s << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2 << ")\">" << ylabel
    << " [" << svg_number(ylo) << ", " << svg_number(yhi) << "]</text>\n";
  s << "<clipPath id=\"plot\"><rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m << "\" height=\""
    << H - 2 * m << "\"/></clipPath>\n";
  int legend = 0;
  for (const auto& layer : layers) {
    const char* dash = layer.dash == Dash::Long ? " stroke-dasharray=\"12,6\"" : layer.dash == Dash::Short ? " stroke-dasharray=\"4,4\"" : "";
    s << "<g clip-path=\"url(#plot)\" fill=\"none\" stroke=\"" << layer.colour << "\" stroke-width=\"1.5\"" << dash << ">\n";
    for (const auto& pl : layer.polylines) {
      if (pl.size() == 1) {
        s << "<circle cx=\"" << svg_number(px(pl[0].first)) << "\" cy=\"" << svg_number(py(pl[0].second))
          << "\" r=\"1.5\" fill=\"" << layer.colour << "\"/>\n";
        continue;
      }
      s << "<polyline points=\"";
      for (std::size_t i = 0; i < pl.size(); ++i) {
        s << (i ? " " : "") << svg_number(px(pl[i].first)) << ',' << svg_number(py(pl[i].second));
      }
      s << "\"/>\n";
    }
    s << "</g>\n";
    if (!layer.label.empty()) {
      const double ly = m + 16 + 16 * legend++;
      s << "<line x1=\"" << W - m - 150 << "\" y1=\"" << ly << "\" x2=\"" << W - m - 110 << "\" y2=\"" << ly
        << "\" stroke=\"" << layer.colour << "\" stroke-width=\"1.5\"" << dash << "/>\n";
      s << "<text x=\"" << W - m - 104 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << layer.label << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace burgers::cli
