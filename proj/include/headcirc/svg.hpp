#pragma once

// Minimal static SVG emission: log-log line plots for frequency sweeps and
// a heatmap for the MRFE grid. Styling is deliberately plain; the data
// channel carries the exact values in embedded comments.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "headcirc/validation.hpp"

namespace headcirc {

namespace detail {

struct PlotFrame {
  double w = 720, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  double x0, x1, y0, y1;  // data ranges (already transformed)

  double px(double x) const {
    return ml + (x - x0) / (x1 - x0) * (w - ml - mr);
  }
  double py(double y) const {
    return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
  }
};

}  // namespace detail

inline std::string sweep_svg(const std::vector<SweepResult>& sweeps,
                             const std::string& title) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  detail::PlotFrame fr;
  fr.x0 = 1e300; fr.x1 = -1e300; fr.y0 = 1e300; fr.y1 = -1e300;
  for (const auto& s : sweeps)
    for (std::size_t i = 0; i < s.freqs.size(); ++i) {
      const double lx = std::log10(s.freqs[i]);
      const double a = std::abs(s.values[i]);
      if (a <= 0.0) continue;
      const double ly = std::log10(a);
      fr.x0 = std::min(fr.x0, lx); fr.x1 = std::max(fr.x1, lx);
      fr.y0 = std::min(fr.y0, ly); fr.y1 = std::max(fr.y1, ly);
    }
  if (fr.y1 <= fr.y0) { fr.y0 -= 1.0; fr.y1 += 1.0; }

  std::ostringstream os;
  os.precision(17);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fr.w
     << "' height='" << fr.h << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << fr.w / 2 << "' y='14' text-anchor='middle'>" << title
     << "</text>\n";
  os << "<text x='" << fr.w / 2 << "' y='" << fr.h - 10
     << "' text-anchor='middle'>log10 frequency (Hz)</text>\n";
  // axes
  os << "<rect x='" << fr.ml << "' y='" << fr.mt << "' width='"
     << fr.w - fr.ml - fr.mr << "' height='" << fr.h - fr.mt - fr.mb
     << "' fill='none' stroke='black'/>\n";
  int ci = 0;
  for (const auto& s : sweeps) {
    os << "<!-- series " << s.label << " -->\n";
    os << "<polyline fill='none' stroke='" << colors[ci % 6]
       << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.freqs.size(); ++i) {
      const double a = std::abs(s.values[i]);
      if (a <= 0.0) continue;
      os << fr.px(std::log10(s.freqs[i])) << "," << fr.py(std::log10(a)) << " ";
    }
    os << "'/>\n";
    os << "<text x='" << fr.w - fr.mr - 5 << "' y='"
       << fr.mt + 16 * (ci + 1) << "' text-anchor='end' fill='"
       << colors[ci % 6] << "'>" << s.label << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string mrfe_grid_svg(const MrfeGrid& grid) {
  const double cell_w = 60, cell_h = 40, ml = 80, mt = 40;
  const double w = ml + cell_w * grid.t_skull.size() + 20;
  const double h = mt + cell_h * grid.etas.size() + 50;
  double vmax = 0.0;
  for (const auto& row : grid.values)
    for (double v : row) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;

  std::ostringstream os;
  os.precision(17);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='"
     << h << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << w / 2
     << "' y='16' text-anchor='middle'>MRFE vs eta and skull thickness"
     << "</text>\n";
  for (std::size_t ie = 0; ie < grid.etas.size(); ++ie) {
    os << "<text x='" << ml - 6 << "' y='" << mt + cell_h * ie + cell_h / 2
       << "' text-anchor='end'>eta=" << grid.etas[ie] << "</text>\n";
    for (std::size_t it = 0; it < grid.t_skull.size(); ++it) {
      const double v = grid.values[ie][it];
      const double t = std::min(1.0, v / vmax);
      const int r = static_cast<int>(255 * t);
      const int b = static_cast<int>(255 * (1.0 - t));
      os << "<rect x='" << ml + cell_w * it << "' y='" << mt + cell_h * ie
         << "' width='" << cell_w << "' height='" << cell_h << "' fill='rgb("
         << r << ",64," << b << ")'><title>" << v << "</title></rect>\n";
    }
  }
  for (std::size_t it = 0; it < grid.t_skull.size(); ++it)
    os << "<text x='" << ml + cell_w * it + cell_w / 2 << "' y='"
       << mt + cell_h * grid.etas.size() + 16 << "' text-anchor='middle'>"
       << grid.t_skull[it] * 1e3 << "</text>\n";
  os << "<text x='" << ml + cell_w * grid.t_skull.size() / 2 << "' y='"
     << h - 8 << "' text-anchor='middle'>t_skull (mm)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace headcirc
