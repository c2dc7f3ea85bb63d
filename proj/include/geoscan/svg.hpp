#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace geoscan::svg {

inline std::string escape(const std::string& s) {
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

// Linear ramp from pale yellow (0) to dark red (1).
inline std::string ramp_color(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const int r = static_cast<int>(255.0 + (128.0 - 255.0) * v + 0.5);
  const int g = static_cast<int>(247.0 + (0.0 - 247.0) * v + 0.5);
  const int b = static_cast<int>(188.0 + (38.0 - 188.0) * v + 0.5);
  return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

struct HeatmapSpec {
  std::string title;
  std::string row_axis;  // drawn along the vertical axis
  std::string col_axis;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  // values[row][col] in [0, 1]
  std::vector<std::vector<double>> values;
  int cell = 48;
};

/// Self-contained SVG: a cell grid, value labels, axis labels and a colour bar.
inline std::string heatmap(const HeatmapSpec& spec) {
  const int cell = spec.cell;
  const int rows = static_cast<int>(spec.values.size());
  const int cols = rows > 0 ? static_cast<int>(spec.values.front().size()) : 0;
  const int left = 90;
  const int top = 50;
  const int bar_gap = 30;
  const int bar_w = 18;
  const int width = left + cols * cell + bar_gap + bar_w + 50;
  const int height = top + rows * cell + 60;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width, height);
  s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                   left + cols * cell / 2, escape(spec.title));

  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = spec.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const int x = left + j * cell;
      const int y = top + i * cell;
      s += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#666666\" stroke-width=\"0.5\"/>\n",
          x, y, cell, cell, ramp_color(v));
      s += fmt::format(
          "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"{}\">{:.2f}</text>\n",
          x + cell / 2, y + cell / 2, v > 0.55 ? "#ffffff" : "#000000", v);
    }
  }
  for (int i = 0; i < rows && i < static_cast<int>(spec.row_labels.size()); ++i) {
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"central\">{}</text>\n",
                     left - 6, top + i * cell + cell / 2, escape(spec.row_labels[static_cast<std::size_t>(i)]));
  }
  for (int j = 0; j < cols && j < static_cast<int>(spec.col_labels.size()); ++j) {
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + j * cell + cell / 2,
                     top + rows * cell + 18, escape(spec.col_labels[static_cast<std::size_t>(j)]));
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + cols * cell / 2,
                   top + rows * cell + 42, escape(spec.col_axis));
  s += fmt::format(
      "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">{}</text>\n",
      top + rows * cell / 2, top + rows * cell / 2, escape(spec.row_axis));

  // Colour bar, 0 at the bottom.
  const int bx = left + cols * cell + bar_gap;
  const int bar_h = std::max(rows * cell, 60);
  const int steps = 20;
  for (int k = 0; k < steps; ++k) {
    const double v = (static_cast<double>(k) + 0.5) / steps;
    const int y = top + bar_h - (k + 1) * bar_h / steps;
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", bx, y, bar_w,
                     bar_h / steps + 1, ramp_color(v));
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\">1</text>\n", bx + bar_w + 4, top + 10);
  s += fmt::format("<text x=\"{}\" y=\"{}\">0</text>\n", bx + bar_w + 4, top + bar_h);
  s += "</svg>\n";
  return s;
}

}  // namespace geoscan::svg
