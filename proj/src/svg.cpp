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

#include "carbench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "carbench/canonical_json.hpp"

namespace carbench {
namespace {

constexpr double kMarkerSize = 5.0;
constexpr int kMarkerShapes = 6;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(int width, int height, std::string_view extra_attrs) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\""
     << extra_attrs << ">\n"
     << "<style>text{font-family:sans-serif;font-size:11px}.title{font-size:14px}</style>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  return os.str();
}

template <typename T>
std::map<std::string, std::size_t> index_tags(std::span<const T> items, std::string T::*field) {
  std::set<std::string> tags;
  for (const auto& item : items) tags.insert(item.*field);
  std::map<std::string, std::size_t> index;
  for (const auto& t : tags) index.emplace(t, index.size());
  return index;
}

std::string marker(std::size_t shape, double cx, double cy, const std::string& color) {
  const double s = kMarkerSize;
  const std::string paint = "fill=\"" + color + "\" stroke=\"#222\" stroke-width=\"0.6\"";
  auto pt = [](double x, double y) { return num(x) + "," + num(y); };
  switch (shape % kMarkerShapes) {
    case 0:
      return "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(s) + "\" " + paint + "/>";
    case 1:
      return "<rect x=\"" + num(cx - s) + "\" y=\"" + num(cy - s) + "\" width=\"" + num(2 * s) +
             "\" height=\"" + num(2 * s) + "\" " + paint + "/>";
    case 2:
      return "<polygon points=\"" + pt(cx, cy - s) + " " + pt(cx - s, cy + s) + " " +
             pt(cx + s, cy + s) + "\" " + paint + "/>";
    case 3:
      return "<polygon points=\"" + pt(cx, cy - s) + " " + pt(cx + s, cy) + " " + pt(cx, cy + s) +
             " " + pt(cx - s, cy) + "\" " + paint + "/>";
    case 4:
      return "<polygon points=\"" + pt(cx, cy + s) + " " + pt(cx - s, cy - s) + " " +
             pt(cx + s, cy - s) + "\" " + paint + "/>";
    default:
      return "<path d=\"M" + pt(cx - s, cy - s) + " L" + pt(cx + s, cy + s) + " M" +
             pt(cx - s, cy + s) + " L" + pt(cx + s, cy - s) + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"2.2\"/>";
  }
}

const std::string& color_for(const PlotStyle& style, std::size_t index) {
  static const std::string kBlack = "#000000";
  if (style.palette.empty()) return kBlack;
  return style.palette[index % style.palette.size()];
}

}  // namespace

std::string render_tradeoff_svg(std::span<const TradeoffPoint> points,
                                std::span<const TradeoffPoint> frontier,
                                std::string_view metric_label, const PlotStyle& style) {
  const double left = 80, right = 180, top = 50, bottom = 70;
  const double px0 = left, px1 = style.width - right;
  const double py0 = top, py1 = style.height - bottom;

  auto clamped = [&](double c) { return c > 0.0 ? c : style.zero_clamp_g; };
  int lo = 0, hi = 1;
  if (!points.empty()) {
    double cmin = clamped(points.front().c_total_g), cmax = cmin;
    for (const auto& p : points) {
      cmin = std::min(cmin, clamped(p.c_total_g));
      cmax = std::max(cmax, clamped(p.c_total_g));
    }
    lo = static_cast<int>(std::floor(std::log10(cmin)));
    hi = static_cast<int>(std::ceil(std::log10(cmax)));
    if (hi <= lo) hi = lo + 1;
  }
  auto x_of = [&](double c) {
    return px0 + (std::log10(clamped(c)) - lo) / static_cast<double>(hi - lo) * (px1 - px0);
  };
  auto y_of = [&](double p) { return py1 - p * (py1 - py0); };

  std::ostringstream os;
  os << header(style.width, style.height,
               " data-x-scale=\"log10\" data-x-min-decade=\"" + std::to_string(lo) +
                   "\" data-x-max-decade=\"" + std::to_string(hi) + "\" data-metric=\"" +
                   escape(metric_label) + "\"");
  os << "<text class=\"title\" x=\"" << num(px0) << "\" y=\"" << num(top - 20) << "\">"
     << escape(metric_label) << " vs total carbon</text>\n";

  os << "<g class=\"axes\" stroke=\"#999\" stroke-width=\"0.5\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double y = y_of(k / 5.0);
    os << "<line x1=\"" << num(px0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(px1) << "\" y2=\""
       << num(y) << "\" stroke=\"#e5e5e5\"/>\n";
    os << "<text x=\"" << num(px0 - 8) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\" stroke=\"none\">" << num(k / 5.0).substr(0, 3) << "</text>\n";
  }
  for (int d = lo; d <= hi; ++d) {
    const double x = px0 + static_cast<double>(d - lo) / (hi - lo) * (px1 - px0);
    os << "<line class=\"x-tick\" data-decade=\"" << d << "\" x1=\"" << num(x) << "\" y1=\""
       << num(py1) << "\" x2=\"" << num(x) << "\" y2=\"" << num(py1 + 5) << "\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(py1 + 18)
       << "\" text-anchor=\"middle\" stroke=\"none\">1e" << d << "</text>\n";
  }
  os << "<rect x=\"" << num(px0) << "\" y=\"" << num(py0) << "\" width=\"" << num(px1 - px0)
     << "\" height=\"" << num(py1 - py0) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  os << "</g>\n";
  os << "<text class=\"x-label\" x=\"" << num((px0 + px1) / 2) << "\" y=\"" << num(py1 + 40)
     << "\" text-anchor=\"middle\">Total carbon emissions, training + inference (gCO2, log scale)</text>\n";
  os << "<text class=\"y-label\" transform=\"translate(" << num(px0 - 45) << " "
     << num((py0 + py1) / 2) << ") rotate(-90)\" text-anchor=\"middle\">" << escape(metric_label)
     << "</text>\n";

  if (points.empty()) {
    os << "<text class=\"empty\" x=\"" << num((px0 + px1) / 2) << "\" y=\"" << num((py0 + py1) / 2)
       << "\" text-anchor=\"middle\">no eligible models</text>\n</svg>\n";
    return os.str();
  }

  const auto colors = index_tags(points, &TradeoffPoint::dataset);
  const auto shapes = index_tags(points, &TradeoffPoint::family);
  std::set<std::string> on_frontier;
  for (const auto& f : frontier) on_frontier.insert(f.model_id);

  if (!frontier.empty()) {
    std::vector<std::pair<double, double>> verts;
    auto push = [&](double x, double y) {
      if (verts.empty() || verts.back() != std::make_pair(x, y)) verts.emplace_back(x, y);
    };
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const double x = x_of(frontier[i].c_total_g), y = y_of(frontier[i].p);
      if (i > 0) push(x, y_of(frontier[i - 1].p));
      push(x, y);
    }
    os << "<polyline class=\"frontier\" data-models=\"";
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      os << (i ? " " : "") << escape(frontier[i].model_id);
    }
    os << "\" points=\"";
    for (std::size_t i = 0; i < verts.size(); ++i) {
      os << (i ? " " : "") << num(verts[i].first) << "," << num(verts[i].second);
    }
    os << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1.2\" stroke-dasharray=\"4 3\"/>\n";
  }

  std::size_t n_clamped = 0;
  os << "<g class=\"points\">\n";
  for (const auto& p : points) {
    const bool clamp = !(p.c_total_g > 0.0);
    n_clamped += clamp ? 1 : 0;
    os << "<g class=\"point\" data-model=\"" << escape(p.model_id) << "\" data-dataset=\""
       << escape(p.dataset) << "\" data-family=\"" << escape(p.family) << "\" data-carbon=\""
       << format_double(p.c_total_g) << "\" data-performance=\"" << format_double(p.p)
       << "\" data-frontier=\"" << (on_frontier.contains(p.model_id) ? "true" : "false") << "\""
       << (clamp ? " data-clamped=\"true\"" : "") << ">"
       << marker(shapes.at(p.family), x_of(p.c_total_g), y_of(p.p),
                 color_for(style, colors.at(p.dataset)))
       << "</g>\n";
  }
  os << "</g>\n";

  double ly = py0 + 5;
  const double lx = px1 + 20;
  os << "<g class=\"legend\">\n<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\">Dataset</text>\n";
  for (const auto& [tag, idx] : colors) {
    ly += 16;
    os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << color_for(style, idx) << "\"/><text x=\"" << num(lx + 16) << "\" y=\"" << num(ly) << "\">"
       << escape(tag) << "</text>\n";
  }
  ly += 26;
  os << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\">Family</text>\n";
  for (const auto& [tag, idx] : shapes) {
    ly += 16;
    os << marker(idx, lx + 5, ly - 4, "#bbbbbb") << "<text x=\"" << num(lx + 16) << "\" y=\""
       << num(ly) << "\">" << escape(tag) << "</text>\n";
  }
  os << "</g>\n";

  if (n_clamped > 0) {
    os << "<text class=\"footnote\" x=\"" << num(px0) << "\" y=\"" << num(style.height - 8.0)
       << "\">* " << n_clamped << " point(s) with zero carbon drawn at "
       << format_double(style.zero_clamp_g) << " g</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_score_grid(std::span<const ScoreEntry> entries,
                              std::span<const Metric> metric_rows, const PlotStyle& style) {
  std::vector<Metric> rows;
  for (Metric m : metric_rows) {
    if (std::any_of(entries.begin(), entries.end(), [&](const ScoreEntry& e) { return e.metric == m; })) {
      rows.push_back(m);
    }
  }
  std::set<std::string> dataset_set, family_set;
  for (const auto& e : entries) {
    if (std::find(rows.begin(), rows.end(), e.metric) == rows.end()) continue;
    dataset_set.insert(e.dataset);
    family_set.insert(e.family);
  }
  const std::vector<std::string> cols(dataset_set.begin(), dataset_set.end());
  const std::vector<std::string> families(family_set.begin(), family_set.end());

  const double left = 110, top = 60, right = 20, bottom = 60;
  const double cw = style.cell_width, ch = style.cell_height;
  const int width = static_cast<int>(left + cw * std::max<std::size_t>(cols.size(), 1) + right);
  const int height = static_cast<int>(top + ch * std::max<std::size_t>(rows.size(), 1) + bottom);
  const double pad_x = 10, pad_top = 10, pad_bottom = 20;
  const double plot_h = ch - pad_top - pad_bottom;

  std::ostringstream os;
  os << header(width, height,
               " data-rows=\"" + std::to_string(rows.size()) + "\" data-cols=\"" +
                   std::to_string(cols.size()) + "\"");
  os << "<text class=\"title\" x=\"" << num(left) << "\" y=\"22\">Scalar carbon-aware score by metric and dataset</text>\n";

  if (rows.empty() || cols.empty()) {
    os << "<text class=\"empty\" x=\"" << num(width / 2.0) << "\" y=\"" << num(height / 2.0)
       << "\" text-anchor=\"middle\">no scores</text>\n</svg>\n";
    return os.str();
  }

  for (std::size_t c = 0; c < cols.size(); ++c) {
    os << "<text class=\"col-label\" x=\"" << num(left + cw * c + cw / 2) << "\" y=\""
       << num(top - 8) << "\" text-anchor=\"middle\">" << escape(cols[c]) << "</text>\n";
  }

  const double slot = (cw - 2 * pad_x) / static_cast<double>(families.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double cell_top = top + ch * r;
    os << "<text class=\"row-label\" x=\"" << num(left - 10) << "\" y=\"" << num(cell_top + ch / 2)
       << "\" text-anchor=\"end\">" << to_string(rows[r]) << "</text>\n";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double cell_left = left + cw * c;
      const double baseline = cell_top + pad_top + plot_h;
      os << "<g class=\"cell\" data-metric=\"" << to_string(rows[r]) << "\" data-dataset=\""
         << escape(cols[c]) << "\" data-plot-height=\"" << num(plot_h) << "\">\n";
      os << "<rect x=\"" << num(cell_left) << "\" y=\"" << num(cell_top) << "\" width=\"" << num(cw)
         << "\" height=\"" << num(ch) << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
      os << "<line x1=\"" << num(cell_left + pad_x) << "\" y1=\"" << num(cell_top + pad_top)
         << "\" x2=\"" << num(cell_left + cw - pad_x) << "\" y2=\"" << num(cell_top + pad_top)
         << "\" stroke=\"#e5e5e5\" stroke-dasharray=\"2 2\"/>\n";
      os << "<line x1=\"" << num(cell_left + pad_x) << "\" y1=\"" << num(baseline) << "\" x2=\""
         << num(cell_left + cw - pad_x) << "\" y2=\"" << num(baseline) << "\" stroke=\"#333\"/>\n";
      for (std::size_t f = 0; f < families.size(); ++f) {
        const ScoreEntry* best = nullptr;
        for (const auto& e : entries) {
          if (e.metric != rows[r] || e.dataset != cols[c] || e.family != families[f]) continue;
          if (!best || e.scas > best->scas || (e.scas == best->scas && e.model_id < best->model_id)) {
            best = &e;
          }
        }
        if (!best) continue;
        const double bar_h = best->scas * plot_h;
        const double bar_w = slot * 0.7;
        const double x = cell_left + pad_x + slot * f + (slot - bar_w) / 2;
        os << "<rect class=\"bar\" data-family=\"" << escape(families[f]) << "\" data-model=\""
           << escape(best->model_id) << "\" data-scas=\"" << format_double(best->scas)
           << "\" x=\"" << num(x) << "\" y=\"" << num(baseline - bar_h) << "\" width=\""
           << num(bar_w) << "\" height=\"" << num(bar_h) << "\" fill=\"" << color_for(style, f)
           << "\"/>\n";
      }
      os << "</g>\n";
    }
  }

  double lx = left;
  const double ly = top + ch * rows.size() + 30;
  os << "<g class=\"legend\">\n";
  for (std::size_t f = 0; f < families.size(); ++f) {
    os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << color_for(style, f) << "\"/><text x=\"" << num(lx + 14) << "\" y=\"" << num(ly) << "\">"
       << escape(families[f]) << "</text>\n";
    lx += 24 + 7.0 * static_cast<double>(families[f].size());
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace carbench
