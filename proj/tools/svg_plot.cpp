// Copyright 2026 The dptune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dptune::svg {
namespace {

constexpr int kMarginLeft = 78;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 42;
constexpr int kMarginBottom = 58;

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range Pad(Range r) {
  if (r.hi <= r.lo) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  double pad = 0.06 * (r.hi - r.lo);
  return {r.lo - pad, r.hi + pad};
}

std::vector<double> Ticks(const Range& r, int count) {
  std::vector<double> out;
  double span = r.hi - r.lo;
  double raw = span / count;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  double first = std::ceil(r.lo / step) * step;
  for (double t = first; t <= r.hi + 1e-12 * span; t += step) {
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return out;
}

}  // namespace

std::string Render(const PlotSpec& spec) {
  Range xr{1e300, -1e300}, yr{1e300, -1e300};
  for (const auto& s : spec.series) {
    for (const auto& p : s.points) {
      xr.lo = std::min(xr.lo, p.x);
      xr.hi = std::max(xr.hi, p.x);
      yr.lo = std::min(yr.lo, p.y - p.y_err);
      yr.hi = std::max(yr.hi, p.y + p.y_err);
    }
  }
  if (xr.lo > xr.hi) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  xr = Pad(xr);
  yr = Pad(yr);

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  auto X = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto Y = [&](double y) {
    return kMarginTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

  // Axes, ticks, grid.
  for (double t : Ticks(xr, 6)) {
    double x = X(t);
    out << "<line x1=\"" << Num(x) << "\" y1=\"" << kMarginTop << "\" x2=\"" << Num(x)
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << Num(x) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << Num(t)
        << "</text>\n";
  }
  for (double t : Ticks(yr, 6)) {
    double y = Y(t);
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << Num(y) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << Num(y) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << Num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << Num(t)
        << "</text>\n";
  }
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << Num(plot_w)
      << "\" height=\"" << Num(plot_h) << "\" fill=\"none\" stroke=\"#404040\"/>\n";
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << spec.height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << spec.x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << kMarginTop + plot_h / 2 << ")\">" << spec.y_label
      << "</text>\n";

  // Series.
  for (const auto& s : spec.series) {
    if (s.draw_line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : s.points) out << Num(X(p.x)) << "," << Num(Y(p.y)) << " ";
      out << "\"/>\n";
    }
    for (const auto& p : s.points) {
      if (p.y_err > 0.0) {
        out << "<line x1=\"" << Num(X(p.x)) << "\" y1=\"" << Num(Y(p.y - p.y_err)) << "\" x2=\""
            << Num(X(p.x)) << "\" y2=\"" << Num(Y(p.y + p.y_err)) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n";
      }
      if (s.draw_markers || p.y_err > 0.0) {
        out << "<circle cx=\"" << Num(X(p.x)) << "\" cy=\"" << Num(Y(p.y)) << "\" r=\"3.5\" "
            << "fill=\"" << s.color << "\"/>\n";
      }
    }
  }

  // Legend.
  double ly = kMarginTop + 10;
  for (const auto& s : spec.series) {
    double lx = kMarginLeft + plot_w - 150;
    out << "<line x1=\"" << Num(lx) << "\" y1=\"" << Num(ly) << "\" x2=\"" << Num(lx + 22)
        << "\" y2=\"" << Num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << Num(lx + 28) << "\" y=\"" << Num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  return out.str();
}

void WriteFile(const std::string& path, const PlotSpec& spec) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << Render(spec);
}

}  // namespace dptune::svg
