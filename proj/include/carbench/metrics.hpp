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

#ifndef CARBENCH_METRICS_HPP_
#define CARBENCH_METRICS_HPP_

#include <array>
#include <optional>
#include <string_view>

namespace carbench {

enum class Metric { accuracy, precision, recall, f1 };

inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::accuracy, Metric::precision,
                                                      Metric::recall, Metric::f1};

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

/// Task performance in [0, 1]. Absent metrics stay absent, never zero.
struct PerformanceMetrics {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;

  std::optional<double> get(Metric metric) const;
  /// Throws ValidationError naming the metric if value is outside [0, 1].
  void set(Metric metric, double value);
  bool empty() const;

  friend bool operator==(const PerformanceMetrics&, const PerformanceMetrics&) = default;
};

}  // namespace carbench

#endif  // CARBENCH_METRICS_HPP_
