#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecac/dataset.hpp"
#include "ecac/error.hpp"

namespace ecac {

// Category colors; index i % 20 is used for group i.
inline constexpr std::array<const char*, 20> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
};
inline constexpr const char* kUngroupedColor = "#d9d9d9";

inline const char* palette_color(std::size_t group) { return kPalette[group % kPalette.size()]; }

/// What to draw for one scatter plot. group[i] empty means the object is drawn
/// small and gray.
struct ScatterSpec {
  std::size_t dim = 2;
  std::span<const double> points;  // row-major, dim columns
  std::vector<std::optional<std::size_t>> group;
  std::vector<ObjectId> markers;            // drawn large with a black outline
  std::vector<std::size_t> marker_group;
  std::string title;
};

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
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

}  // namespace detail

/// SVG 1.1 scatter plot over a 1000x1000 view box. Each axis is min-max
/// scaled into the box with a 5% margin; only the first two coordinates are
/// used.
inline std::string render_scatter_svg(const ScatterSpec& spec) {
  if (spec.dim < 2) throw NotPlottable("scatter plots need at least two coordinates");
  const std::size_t n = spec.points.size() / spec.dim;
  if (n == 0 || spec.points.size() % spec.dim != 0)
    throw NotPlottable("no points to plot");
  if (spec.group.size() != n) throw NotPlottable("group list does not match the points");
  if (spec.marker_group.size() != spec.markers.size())
    throw NotPlottable("marker groups do not match the markers");

  constexpr double size = 1000.0, margin = 50.0, span = size - 2 * margin;
  double lo[2], hi[2];
  for (int c = 0; c < 2; ++c) {
    lo[c] = std::numeric_limits<double>::infinity();
    hi[c] = -lo[c];
    for (std::size_t i = 0; i < n; ++i) {
      lo[c] = std::min(lo[c], spec.points[i * spec.dim + c]);
      hi[c] = std::max(hi[c], spec.points[i * spec.dim + c]);
    }
  }
  auto px = [&](std::size_t i, int c) {
    const double v = spec.points[i * spec.dim + c];
    const double t = hi[c] > lo[c] ? (v - lo[c]) / (hi[c] - lo[c]) : 0.5;
    // SVG y grows downwards.
    return c == 0 ? margin + t * span : size - margin - t * span;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
  if (!spec.title.empty())
    out += "<title>" + detail::xml_escape(spec.title) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";

  // Ungrouped points first so colored ones stay visible.
  out += "<g id=\"points\" stroke=\"none\">\n";
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool grouped = spec.group[i].has_value();
      if (grouped != (pass == 1)) continue;
      out += "<circle cx=\"" + detail::fmt2(px(i, 0)) + "\" cy=\"" + detail::fmt2(px(i, 1)) +
             "\" r=\"" + (grouped ? "4" : "3") + "\" fill=\"" +
             (grouped ? palette_color(*spec.group[i]) : kUngroupedColor) + "\"/>\n";
    }
  }
  out += "</g>\n<g id=\"centers\" stroke=\"black\" stroke-width=\"2\">\n";
  for (std::size_t m = 0; m < spec.markers.size(); ++m) {
    const auto i = spec.markers[m];
    if (i >= n) throw NotPlottable("marker id " + std::to_string(i) + " out of range");
    out += "<circle cx=\"" + detail::fmt2(px(i, 0)) + "\" cy=\"" + detail::fmt2(px(i, 1)) +
           "\" r=\"10\" fill=\"" + palette_color(spec.marker_group[m]) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace ecac
