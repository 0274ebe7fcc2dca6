#pragma once

#include <span>
#include <string>
#include <vector>

#include "biocircuit/io/csv.hpp"

namespace biocircuit::io {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  std::string title;
  std::string x_label = "t";
  std::string y_label = "value";
};

/// Self-contained 800x500 line plot: one polyline per series, axes, tick
/// labels and a legend. Identical inputs produce identical bytes.
std::string emit_svg(std::span<const Series> series, const PlotStyle& style);

}  // namespace biocircuit::io
