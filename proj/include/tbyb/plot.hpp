#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tbyb/csv.hpp"

namespace tbyb {

struct PlotSpec {
  std::string x = "tcod";
  std::string y = "mean_profit";
  std::string series = "strategy";
  std::optional<std::string> facet; // one panel per distinct value
  std::vector<std::pair<std::string, std::string>> filters; // keep rows where column == value
  std::string title;
};

// Line chart as a standalone SVG document: one polyline and a marker per point
// for every series value, axes with labels and a legend. Rows whose x or y is
// empty or non-numeric are skipped; points sharing (facet, series, x) are
// averaged. Output bytes depend only on the inputs.
// Throws ConfigError on a missing column or when no plottable rows remain.
std::string render_plot_svg(const csv::Table& table, const PlotSpec& spec);

} // namespace tbyb
