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
#pragma once

#include <string>
#include <vector>

// Minimal self-contained SVG line/scatter plots; no external plotting
// dependencies. Output is deterministic for identical input.
namespace dptune::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double y_err = 0.0;  // half-length of an error bar; 0 draws none
};

struct Series {
  std::string label;
  std::string color;  // e.g. "#1f77b4"
  bool draw_line = true;
  bool draw_markers = false;
  std::vector<Point> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 760;
  int height = 520;
  std::vector<Series> series;
};

std::string Render(const PlotSpec& spec);
void WriteFile(const std::string& path, const PlotSpec& spec);

}  // namespace dptune::svg
