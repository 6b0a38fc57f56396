#include "rsoc/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rsoc/csvio.hpp"

namespace rsoc {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;
constexpr double kLogFloor = 1e-16;  // log axis clamp for zero/negative samples

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;    // pixel box (y0 = top)
  double xmin, xmax;        // data range
  double ymin, ymax;        // data range (log10 values when log axis)
  bool log_y;

  double px(double x) const {
    double t = xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5;
    return x0 + t * (x1 - x0);
  }
  double py(double y) const {
    double v = log_y ? std::log10(std::max(y, kLogFloor)) : y;
    double t = ymax > ymin ? (v - ymin) / (ymax - ymin) : 0.5;
    return y1 - t * (y1 - y0);
  }
};

// Roughly `count` linear ticks at 1/2/5 spacing.
std::vector<double> linear_ticks(double lo, double hi, int count) {
  std::vector<double> out;
  if (!(hi > lo)) return {lo};
  double raw = (hi - lo) / std::max(1, count);
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
  double first = std::ceil(lo / step) * step;
  for (double v = first; v <= hi + 0.5 * step; v += step) out.push_back(v);
  return out;
}

void render_panel(std::ostringstream& svg, const PlotSpec& spec, int width, int top,
                  int height, bool draw_x_label) {
  const double ml = 64, mr = 16, mt = 28, mb = draw_x_label ? 40 : 24;
  Frame fr;
  fr.x0 = ml;
  fr.x1 = width - mr;
  fr.y0 = top + mt;
  fr.y1 = top + height - mb;
  fr.log_y = spec.log_y;

  // Data ranges.
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series) {
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      double y = spec.log_y ? std::log10(std::max(s.y[i], kLogFloor)) : s.y[i];
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) { ymin -= 0.5; ymax += 0.5; }
  double ypad = 0.05 * (ymax - ymin);
  fr.xmin = xmin;
  fr.xmax = xmax;
  fr.ymin = ymin - ypad;
  fr.ymax = ymax + ypad;

  // Frame + title.
  svg << "<rect x='" << fr.x0 << "' y='" << fr.y0 << "' width='" << fr.x1 - fr.x0
      << "' height='" << fr.y1 - fr.y0
      << "' fill='white' stroke='#444' stroke-width='1'/>\n";
  svg << "<text x='" << (fr.x0 + fr.x1) / 2 << "' y='" << top + 18
      << "' text-anchor='middle' font-size='14' font-family='sans-serif'>"
      << xml_escape(spec.title) << "</text>\n";

  // Y ticks.
  if (spec.log_y) {
    int d0 = static_cast<int>(std::ceil(fr.ymin));
    int d1 = static_cast<int>(std::floor(fr.ymax));
    int stride = std::max(1, (d1 - d0) / 6);
    for (int d = d0; d <= d1; d += stride) {
      double y = fr.y1 - (d - fr.ymin) / (fr.ymax - fr.ymin) * (fr.y1 - fr.y0);
      svg << "<line x1='" << fr.x0 << "' y1='" << y << "' x2='" << fr.x1 << "' y2='" << y
          << "' stroke='#ddd' stroke-width='0.5'/>\n";
      svg << "<text x='" << fr.x0 - 6 << "' y='" << y + 4
          << "' text-anchor='end' font-size='11' font-family='sans-serif'>1e" << d
          << "</text>\n";
    }
  } else {
    for (double v : linear_ticks(fr.ymin, fr.ymax, 5)) {
      double y = fr.py(v);
      svg << "<line x1='" << fr.x0 << "' y1='" << y << "' x2='" << fr.x1 << "' y2='" << y
          << "' stroke='#ddd' stroke-width='0.5'/>\n";
      svg << "<text x='" << fr.x0 - 6 << "' y='" << y + 4
          << "' text-anchor='end' font-size='11' font-family='sans-serif'>" << num(v)
          << "</text>\n";
    }
  }

  // X ticks.
  for (double v : linear_ticks(fr.xmin, fr.xmax, 6)) {
    double x = fr.px(v);
    svg << "<line x1='" << x << "' y1='" << fr.y1 << "' x2='" << x << "' y2='" << fr.y1 + 4
        << "' stroke='#444' stroke-width='1'/>\n";
    svg << "<text x='" << x << "' y='" << fr.y1 + 16
        << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << num(v)
        << "</text>\n";
  }
  if (draw_x_label && !spec.x_label.empty())
    svg << "<text x='" << (fr.x0 + fr.x1) / 2 << "' y='" << fr.y1 + 32
        << "' text-anchor='middle' font-size='12' font-family='sans-serif'>"
        << xml_escape(spec.x_label) << "</text>\n";
  if (!spec.y_label.empty())
    svg << "<text x='" << fr.x0 - 48 << "' y='" << (fr.y0 + fr.y1) / 2
        << "' text-anchor='middle' font-size='12' font-family='sans-serif' transform='rotate(-90 "
        << fr.x0 - 48 << " " << (fr.y0 + fr.y1) / 2 << ")'>" << xml_escape(spec.y_label)
        << "</text>\n";

  // Stage-boundary rules.
  for (double v : spec.vlines) {
    if (v < fr.xmin || v > fr.xmax) continue;
    double x = fr.px(v);
    svg << "<line x1='" << x << "' y1='" << fr.y0 << "' x2='" << x << "' y2='" << fr.y1
        << "' stroke='#999' stroke-width='1' stroke-dasharray='4 3'/>\n";
  }

  // Series polylines.
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    std::string color = s.color.empty() ? kPalette[si % kPaletteSize] : s.color;
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.6'";
    if (s.dashed) svg << " stroke-dasharray='6 3'";
    svg << " points='";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      svg << num(fr.px(s.x[i])) << "," << num(fr.py(s.y[i])) << " ";
    svg << "'/>\n";
  }

  // Legend (skip when single unlabeled series).
  bool legend = spec.series.size() > 1 ||
                (spec.series.size() == 1 && !spec.series[0].label.empty());
  if (legend) {
    double lx = fr.x1 - 150, ly = fr.y0 + 10;
    for (size_t si = 0; si < spec.series.size(); ++si) {
      const auto& s = spec.series[si];
      std::string color = s.color.empty() ? kPalette[si % kPaletteSize] : s.color;
      svg << "<line x1='" << lx << "' y1='" << ly << "' x2='" << lx + 22 << "' y2='" << ly
          << "' stroke='" << color << "' stroke-width='1.6'"
          << (s.dashed ? " stroke-dasharray='6 3'" : "") << "/>\n";
      svg << "<text x='" << lx + 28 << "' y='" << ly + 4
          << "' font-size='11' font-family='sans-serif'>" << xml_escape(s.label)
          << "</text>\n";
      ly += 16;
    }
  }
}

}  // namespace

std::string render_svg(const PlotSpec& spec, int width, int height) {
  return render_svg_stack({spec}, width, height);
}

std::string render_svg_stack(const std::vector<PlotSpec>& panels, int width, int panel_height) {
  if (panels.empty()) throw std::invalid_argument("render_svg_stack: no panels");
  int total = panel_height * static_cast<int>(panels.size());
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << total
      << "' viewBox='0 0 " << width << " " << total << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  for (size_t i = 0; i < panels.size(); ++i)
    render_panel(svg, panels[i], width, static_cast<int>(i) * panel_height, panel_height,
                 i + 1 == panels.size());
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const std::string& svg) {
  write_text_file(path, svg);
}

}  // namespace rsoc
