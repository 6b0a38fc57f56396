#pragma once

#include <string>
#include <vector>

namespace rsoc {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  // empty -> palette color by index
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label;
  bool log_y = true;
  std::vector<double> vlines;  // e.g. stage boundaries
  std::vector<PlotSeries> series;
};

// Self-contained SVG line chart; no external plotting dependency.
std::string render_svg(const PlotSpec& spec, int width = 760, int height = 420);

// Two stacked panels sharing the x axis (cost on top, gradient norm below).
std::string render_svg_stack(const std::vector<PlotSpec>& panels, int width = 760,
                             int panel_height = 300);

void write_svg(const std::string& path, const std::string& svg);

}  // namespace rsoc
