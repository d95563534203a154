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

#include "carbench/metrics.hpp"

#include <cmath>
#include <string>

#include "carbench/error.hpp"

namespace carbench {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::accuracy: return "accuracy";
    case Metric::precision: return "precision";
    case Metric::recall: return "recall";
    case Metric::f1: return "f1";
  }
  return "accuracy";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError("unknown metric '" + std::string(text) +
                        "' (expected accuracy, precision, recall or f1)");
}

std::optional<double> PerformanceMetrics::get(Metric metric) const {
  switch (metric) {
    case Metric::accuracy: return accuracy;
    case Metric::precision: return precision;
    case Metric::recall: return recall;
    case Metric::f1: return f1;
  }
  return std::nullopt;
}

void PerformanceMetrics::set(Metric metric, double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw ValidationError("metric " + std::string(to_string(metric)) + " = " +
                          std::to_string(value) + " is outside [0, 1]");
  }
  switch (metric) {
    case Metric::accuracy: accuracy = value; break;
    case Metric::precision: precision = value; break;
    case Metric::recall: recall = value; break;
    case Metric::f1: f1 = value; break;
  }
}

bool PerformanceMetrics::empty() const { return !accuracy && !precision && !recall && !f1; }

}  // namespace carbench
