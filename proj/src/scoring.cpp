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

#include "carbench/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "carbench/error.hpp"

namespace carbench {

Normalized min_max_normalize(std::span<const double> values) {
  if (values.empty()) throw ValidationError("cannot normalize an empty list");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("cannot normalize non-finite values");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - min;

  Normalized out;
  out.values.reserve(values.size());
  if (!(range > 0.0)) {
    out.degenerate = true;
    out.values.assign(values.size(), 0.5);
    return out;
  }
  for (double v : values) {
    out.values.push_back((v - min) / range);
  }
  return out;
}

double scas(double p_hat, double c_hat, double alpha) {
  auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!unit(p_hat) || !unit(c_hat) || !unit(alpha)) {
    throw ValidationError("scas inputs must lie in [0, 1]");
  }
  return alpha * p_hat + (1.0 - alpha) * (1.0 - c_hat);
}

std::vector<TradeoffPoint> tradeoff_set(std::span<const EvaluationRecord> records, Metric metric,
                                        std::vector<Exclusion>* skipped) {
  std::vector<TradeoffPoint> points;
  for (const auto& r : records) {
    if (!r.ok()) {
      if (skipped) skipped->push_back({r.model_id, metric, "evaluation failed"});
      continue;
    }
    const auto p = r.metrics.get(metric);
    if (!p) {
      if (skipped) {
        skipped->push_back({r.model_id, metric, "metric " + std::string(to_string(metric)) + " missing"});
      }
      continue;
    }
    points.push_back({r.model_id, r.family, r.dataset, metric, r.emissions.c_total_g, *p});
  }
  return points;
}

bool dominates(const TradeoffPoint& q, const TradeoffPoint& p) {
  return q.c_total_g <= p.c_total_g && q.p >= p.p && (q.c_total_g < p.c_total_g || q.p > p.p);
}

void sort_by_carbon(std::vector<TradeoffPoint>& points) {
  std::sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    if (a.c_total_g != b.c_total_g) return a.c_total_g < b.c_total_g;
    if (a.p != b.p) return a.p > b.p;
    return a.model_id < b.model_id;
  });
}

std::vector<TradeoffPoint> pareto_frontier(std::span<const TradeoffPoint> points) {
  std::vector<TradeoffPoint> sorted(points.begin(), points.end());
  sort_by_carbon(sorted);

  // Within a carbon level only the points at the level's best performance can
  // survive, and only if they beat everything cheaper.
  std::vector<TradeoffPoint> frontier;
  double best_cheaper = -1.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].c_total_g == sorted[i].c_total_g) ++j;
    const double level_best = sorted[i].p;
    if (level_best > best_cheaper) {
      for (std::size_t k = i; k < j && sorted[k].p == level_best; ++k) frontier.push_back(sorted[k]);
      best_cheaper = level_best;
    }
    i = j;
  }
  return frontier;
}

std::vector<ScoreEntry> rank_models(std::span<const EvaluationRecord> records, Metric metric,
                                    double alpha) {
  const auto points = tradeoff_set(records, metric);
  if (points.empty()) return {};

  std::vector<double> perf, carbon;
  for (const auto& pt : points) {
    perf.push_back(pt.p);
    carbon.push_back(pt.c_total_g);
  }
  const auto p_hat = min_max_normalize(perf);
  const auto c_hat = min_max_normalize(carbon);

  std::vector<ScoreEntry> entries;
  entries.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ScoreEntry e;
    e.model_id = points[i].model_id;
    e.family = points[i].family;
    e.dataset = points[i].dataset;
    e.metric = metric;
    e.p = points[i].p;
    e.c_total_g = points[i].c_total_g;
    e.p_hat = p_hat.values[i];
    e.c_hat = c_hat.values[i];
    e.alpha = alpha;
    e.scas = scas(e.p_hat, e.c_hat, alpha);
    e.performance_constant = p_hat.degenerate;
    e.carbon_constant = c_hat.degenerate;
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const ScoreEntry& a, const ScoreEntry& b) {
    if (a.scas != b.scas) return a.scas > b.scas;
    if (a.c_total_g != b.c_total_g) return a.c_total_g < b.c_total_g;
    return a.model_id < b.model_id;
  });
  return entries;
}

}  // namespace carbench
