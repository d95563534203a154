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

#ifndef CARBENCH_SCORING_HPP_
#define CARBENCH_SCORING_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carbench/metrics.hpp"
#include "carbench/orchestrator.hpp"

namespace carbench {

inline constexpr double kDefaultScasAlpha = 0.5;

struct Normalized {
  std::vector<double> values;
  bool degenerate = false;  // max == min; every value is 0.5
};

/// (v - min) / (max - min) elementwise. Constant input maps to 0.5.
Normalized min_max_normalize(std::span<const double> values);

/// alpha * p_hat + (1 - alpha) * (1 - c_hat). All inputs in [0, 1].
double scas(double p_hat, double c_hat, double alpha);

struct TradeoffPoint {
  std::string model_id;
  std::string family;
  std::string dataset;
  Metric metric = Metric::accuracy;
  double c_total_g = 0.0;
  double p = 0.0;

  friend bool operator==(const TradeoffPoint&, const TradeoffPoint&) = default;
};

/// A record left out of a tradeoff set or ranking, with the reason.
struct Exclusion {
  std::string model_id;
  std::optional<Metric> metric;  // nullopt: excluded from every metric
  std::string reason;

  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

/// One (C_total, P) point per ok record carrying `metric`. Skipped records are
/// appended to `skipped` when given.
std::vector<TradeoffPoint> tradeoff_set(std::span<const EvaluationRecord> records, Metric metric,
                                        std::vector<Exclusion>* skipped = nullptr);

/// q dominates p iff C(q) <= C(p) and P(q) >= P(p) with one inequality strict.
bool dominates(const TradeoffPoint& q, const TradeoffPoint& p);

/// The non-dominated points, duplicates kept, sorted by ascending carbon then
/// descending performance then model_id.
std::vector<TradeoffPoint> pareto_frontier(std::span<const TradeoffPoint> points);

/// Canonical frontier ordering, also used for any point list.
void sort_by_carbon(std::vector<TradeoffPoint>& points);

struct ScoreEntry {
  std::string model_id;
  std::string family;
  std::string dataset;
  Metric metric = Metric::accuracy;
  double p = 0.0;
  double c_total_g = 0.0;
  double p_hat = 0.0;
  double c_hat = 0.0;
  double alpha = kDefaultScasAlpha;
  double scas = 0.0;
  bool performance_constant = false;
  bool carbon_constant = false;

  friend bool operator==(const ScoreEntry&, const ScoreEntry&) = default;
};

/// Normalizes P and C_total over the eligible records, scores them and sorts
/// by SCAS descending; ties go to lower C_total, then model_id.
std::vector<ScoreEntry> rank_models(std::span<const EvaluationRecord> records, Metric metric,
                                    double alpha);

}  // namespace carbench

#endif  // CARBENCH_SCORING_HPP_
