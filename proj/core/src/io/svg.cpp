#include "biocircuit/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace biocircuit::io {
namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 770.0, kTop = 40.0, kBottom = 450.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string emit_svg(std::span<const Series> series, const PlotStyle& style) {
  if (series.empty()) throw EmptySeries("no series to plot");
  for (const Series& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw EmptySeries("series '" + s.name + "' is empty or ragged");
  }

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series) {
    for (double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  auto px = [&](double x) {
    return kLeft + (x - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  };
  auto py = [&](double y) {
    return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";

  // axes
  out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" +
         fmt(kRight) + "\" y2=\"" + fmt(kBottom) +
         "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
         fmt(kLeft) + "\" y2=\"" + fmt(kBottom) +
         "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  // ticks
  for (int k = 0; k <= 5; ++k) {
    const double fx = x_lo + (x_hi - x_lo) * k / 5.0;
    const double gx = kLeft + (kRight - kLeft) * k / 5.0;
    out += "<line x1=\"" + fmt(gx) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(gx) +
           "\" y2=\"" + fmt(kBottom + 5) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(kBottom + 20) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           fmt_tick(fx) + "</text>\n";
    const double fy = y_lo + (y_hi - y_lo) * k / 5.0;
    const double gy = kBottom - (kBottom - kTop) * k / 5.0;
    out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(gy) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(gy) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt(kLeft - 10) + "\" y=\"" + fmt(gy + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
           fmt_tick(fy) + "</text>\n";
  }

  // labels and title
  out += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" + fmt(kHeight - 10) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
         style.x_label + "</text>\n";
  out += "<text x=\"18\" y=\"" + fmt((kTop + kBottom) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         fmt((kTop + kBottom) / 2) + ")\">" + style.y_label + "</text>\n";
  if (!style.title.empty())
    out += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"24\" "
           "font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
           style.title + "</text>\n";

  // one polyline per series
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) out += ' ';
      out += fmt(px(series[s].x[i])) + "," + fmt(py(series[s].y[i]));
    }
    out += "\"/>\n";
  }

  // legend
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double ly = kTop + 16.0 * static_cast<double>(s);
    out += "<line x1=\"" + fmt(kRight - 150) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(kRight - 130) + "\" y2=\"" + fmt(ly) + "\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(kRight - 124) + "\" y=\"" + fmt(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].name +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace biocircuit::io
