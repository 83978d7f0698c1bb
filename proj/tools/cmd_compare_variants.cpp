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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "dptune/subsampling.hpp"
#include "dptune/tuning.hpp"
#include "svg_plot.hpp"

namespace dptune::cli {
namespace {

// "start:stop:step" or a comma-separated list.
std::vector<double> ParseQGrid(const std::string& text) {
  std::vector<double> qs;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    std::string part;
    double vals[3];
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(in, part, ':')) throw std::invalid_argument("bad --q-grid");
      vals[i] = std::stod(part);
    }
    if (!(vals[2] > 0.0)) throw std::invalid_argument("bad --q-grid step");
    for (double q = vals[0]; q <= vals[1] + 1e-12; q += vals[2]) qs.push_back(q);
  } else {
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) qs.push_back(std::stod(part));
  }
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q out of [0, 1]");
  }
  if (qs.empty()) throw std::invalid_argument("empty --q-grid");
  return qs;
}

}  // namespace

int RunCompareVariants(const CompareVariantsOptions& opts) {
  std::vector<double> qs;
  try {
    qs = ParseQGrid(opts.q_grid);
  } catch (const std::invalid_argument& e) {
    std::cerr << "compare-variants: " << e.what() << "\n";
    return kExitUsage;
  }

  const long steps = std::lround(opts.epochs / opts.gamma);
  AlphaGrid grid = AlphaGrid::Default();
  RdpCurve base =
      MechanismSpec::Composed(MechanismSpec::SubsampledGaussian(opts.sigma, opts.gamma), steps)
          .Curve(grid);
  RdpCurve tuning = TuningRdp(base, opts.mu);
  const double baseline = RdpToDp(tuning, opts.delta).epsilon;

  std::ostringstream csv;
  csv << "q,eps_baseline,eps_variant1,eps_variant2\n";
  svg::Series s_base{"baseline", "#2ca02c", true, false, {}};
  svg::Series s_v1{"variant 1", "#1f77b4", true, false, {}};
  svg::Series s_v2{"variant 2", "#ff7f0e", true, false, {}};
  for (double q : qs) {
    double v1 = RdpToDp(Variant1Curve(tuning, base, q), opts.delta).epsilon;
    double v2 = RdpToDp(Variant2Curve(tuning, base, q), opts.delta).epsilon;
    char row[160];
    std::snprintf(row, sizeof(row), "%.10g,%.10g,%.10g,%.10g\n", q, baseline, v1, v2);
    csv << row;
    s_base.points.push_back({q, baseline, 0.0});
    s_v1.points.push_back({q, v1, 0.0});
    s_v2.points.push_back({q, v2, 0.0});
  }
  std::fputs(csv.str().c_str(), stdout);

  std::ofstream f(opts.csv_path, std::ios::binary);
  if (!f) {
    std::cerr << "compare-variants: cannot write " << opts.csv_path << "\n";
    return kExitUsage;
  }
  f << csv.str();

  char title[160];
  std::snprintf(title, sizeof(title),
                "Tuning bounds vs q (gamma=%g, sigma=%g, %g epochs, mu=%g, delta=%g)",
                opts.gamma, opts.sigma, opts.epochs, opts.mu, opts.delta);
  svg::PlotSpec plot;
  plot.title = title;
  plot.x_label = "subsampling ratio q";
  plot.y_label = "epsilon";
  plot.series = {s_base, s_v1, s_v2};
  svg::WriteFile(opts.svg_path, plot);
  return kExitOk;
}

}  // namespace dptune::cli
