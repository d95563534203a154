// Copyright 2026 The carbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CARBENCH_SVG_HPP_
#define CARBENCH_SVG_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbench/scoring.hpp"

namespace carbench {

struct PlotStyle {
  int width = 720;
  int height = 480;
  /// Zero-carbon points are drawn here on the log axis and footnoted.
  double zero_clamp_g = 1e-6;
  int cell_width = 200;
  int cell_height = 150;
  std::vector<std::string> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
};

/// Scatter of performance against log10 total carbon. Colors follow sorted
/// dataset tags, marker shapes follow sorted family tags, and the frontier is
/// drawn as a staircase.
std::string render_tradeoff_svg(std::span<const TradeoffPoint> points,
                                std::span<const TradeoffPoint> frontier,
                                std::string_view metric_label, const PlotStyle& style = {});

/// Metric rows by dataset columns; one SCAS bar per family in each cell. When
/// a family has several models in one cell the best score is drawn.
std::string render_score_grid(std::span<const ScoreEntry> entries,
                              std::span<const Metric> metric_rows, const PlotStyle& style = {});

}  // namespace carbench

#endif  // CARBENCH_SVG_HPP_
