#include "tbyb/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "tbyb/error.hpp"

namespace tbyb {

namespace {

constexpr double kPanelW = 420, kPanelH = 320;
constexpr double kMarginL = 64, kMarginR = 16, kMarginT = 40, kMarginB = 48;
constexpr double kLegendW = 170;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

// Facet and series keys: numeric values order numerically, others lexically.
struct KeyLess {
  bool operator()(const std::string& a, const std::string& b) const {
    const auto da = csv::parse_double(a), db = csv::parse_double(b);
    if (da && db && *da != *db) return *da < *db;
    if (da.has_value() != db.has_value()) return da.has_value();
    return a < b;
  }
};

struct Range {
  double lo = 0, hi = 1;
  void pad() {
    if (hi == lo) {
      const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= d;
      hi += d;
    }
  }
};

std::vector<double> ticks(const Range& r) {
  const double span = r.hi - r.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(r.lo / step) * step; t <= r.hi + step * 1e-9; t += step)
    out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return out;
}

using Series = std::map<double, std::pair<double, int>>;           // x -> (sum y, count)
using Panel = std::map<std::string, Series, KeyLess>;              // series -> points
using Panels = std::map<std::string, Panel, KeyLess>;              // facet -> panel

} // namespace

std::string render_plot_svg(const csv::Table& table, const PlotSpec& spec) {
  auto require = [&](const std::string& name) {
    const auto c = table.column(name);
    if (!c) throw ConfigError(fmt::format("column `{}` not found in input", name));
    return *c;
  };
  const auto xc = require(spec.x);
  const auto yc = require(spec.y);
  const auto sc = require(spec.series);
  const std::optional<std::size_t> fc = spec.facet ? std::optional(require(*spec.facet)) : std::nullopt;
  std::vector<std::pair<std::size_t, std::string>> filters;
  for (const auto& [col, value] : spec.filters) filters.emplace_back(require(col), value);

  if (table.rows.empty()) throw ConfigError("no data rows");

  Panels panels;
  Range xr{INFINITY, -INFINITY}, yr{INFINITY, -INFINITY};
  for (const auto& row : table.rows) {
    if (!std::all_of(filters.begin(), filters.end(), [&](const auto& f) { return row[f.first] == f.second; })) continue;
    const auto x = csv::parse_double(row[xc]);
    const auto y = csv::parse_double(row[yc]);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) continue;
    auto& cell = panels[fc ? row[*fc] : std::string()][row[sc]][*x];
    cell.first += *y;
    cell.second += 1;
  }
  if (panels.empty()) throw ConfigError("no data rows to plot after filtering");

  std::map<std::string, std::size_t, KeyLess> series_color;
  for (const auto& [_, panel] : panels)
    for (const auto& [name, pts] : panel) {
      series_color.emplace(name, 0);
      for (const auto& [x, acc] : pts) {
        const double y = acc.first / acc.second;
        xr.lo = std::min(xr.lo, x);
        xr.hi = std::max(xr.hi, x);
        yr.lo = std::min(yr.lo, y);
        yr.hi = std::max(yr.hi, y);
      }
    }
  {
    std::size_t i = 0;
    for (auto& [_, color] : series_color) color = i++ % kPalette.size();
  }
  xr.pad();
  yr.pad();

  const double width = kPanelW * static_cast<double>(panels.size()) + kLegendW;
  const double height = kPanelH + (spec.title.empty() ? 0.0 : 24.0);
  const double top = spec.title.empty() ? 0.0 : 24.0;
  const double pw = kPanelW - kMarginL - kMarginR, ph = kPanelH - kMarginT - kMarginB;

  std::string s;
  s += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="sans-serif" font-size="11">)",
                   num(width), num(height));
  s += '\n';
  s += fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>)", num(width), num(height));
  s += '\n';
  if (!spec.title.empty())
    s += fmt::format(R"(<text x="{}" y="17" text-anchor="middle" font-size="14">{}</text>)", num(width / 2), esc(spec.title)) + "\n";

  std::size_t p = 0;
  for (const auto& [facet, panel] : panels) {
    const double ox = kPanelW * static_cast<double>(p++) + kMarginL;
    const double oy = top + kMarginT;
    auto px = [&](double x) { return ox + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return oy + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

    s += "<g class=\"panel\">\n";
    if (spec.facet)
      s += fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="12">{} = {}</text>)", num(ox + pw / 2),
                       num(oy - 12), esc(*spec.facet), esc(facet)) + "\n";
    s += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333333"/>)", num(ox), num(oy),
                     num(pw), num(ph)) + "\n";
    for (double t : ticks(xr)) {
      s += fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#e5e5e5"/>)", num(px(t)), num(oy), num(oy + ph)) + "\n";
      s += fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{:g}</text>)", num(px(t)), num(oy + ph + 14), t) + "\n";
    }
    for (double t : ticks(yr)) {
      s += fmt::format(R"(<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#e5e5e5"/>)", num(py(t)), num(ox), num(ox + pw)) + "\n";
      s += fmt::format(R"(<text x="{}" y="{}" text-anchor="end">{:g}</text>)", num(ox - 4), num(py(t) + 4), t) + "\n";
    }
    s += fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{}</text>)", num(ox + pw / 2), num(oy + ph + 32), esc(spec.x)) + "\n";
    s += fmt::format(R"svg(<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(-90 {0} {1})">{2}</text>)svg",
                     num(ox - 44), num(oy + ph / 2), esc(spec.y)) + "\n";

    for (const auto& [name, pts] : panel) {
      const char* color = kPalette[series_color.at(name)];
      std::string points;
      for (const auto& [x, acc] : pts) {
        if (!points.empty()) points += ' ';
        points += num(px(x)) + "," + num(py(acc.first / acc.second));
      }
      s += fmt::format(R"(<polyline class="series" data-series="{}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>)",
                       esc(name), color, points) + "\n";
      for (const auto& [x, acc] : pts)
        s += fmt::format(R"(<circle class="marker" cx="{}" cy="{}" r="2.5" fill="{}"/>)", num(px(x)),
                         num(py(acc.first / acc.second)), color) + "\n";
    }
    s += "</g>\n";
  }

  const double lx = kPanelW * static_cast<double>(panels.size()) + 8;
  double ly = top + kMarginT + 4;
  s += "<g class=\"legend\">\n";
  for (const auto& [name, color] : series_color) {
    s += fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{3}" stroke-width="2"/>)", num(lx), num(ly),
                     num(lx + 18), kPalette[color]);
    s += fmt::format(R"(<text x="{}" y="{}">{}</text>)", num(lx + 24), num(ly + 4), esc(name)) + "\n";
    ly += 16;
  }
  s += "</g>\n</svg>\n";
  return s;
}

} // namespace tbyb
