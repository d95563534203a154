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

#ifndef CARBENCH_ORCHESTRATOR_HPP_
#define CARBENCH_ORCHESTRATOR_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbench/carbon.hpp"
#include "carbench/energy_model.hpp"
#include "carbench/metering.hpp"
#include "carbench/metrics.hpp"
#include "carbench/workload.hpp"

namespace carbench {

struct ModelSpec {
  std::string model_id;
  std::string family;   // e.g. mlp, cnn, transformer, mixer
  std::string dataset;
  WorkloadDescriptor training;
  WorkloadDescriptor inference;
  std::filesystem::path metrics_source;

  void validate() const;
};

enum class RecordStatus { ok, failed };

std::string_view to_string(RecordStatus status);
RecordStatus parse_record_status(std::string_view text);

struct EvaluationRecord {
  std::string model_id;
  std::string family;
  std::string dataset;
  RecordStatus status = RecordStatus::failed;
  std::optional<std::string> failure_reason;
  PerformanceMetrics metrics;
  double e_training_kwh = 0.0;
  double e_inference_kwh = 0.0;
  EmissionBreakdown emissions;
  /// Intensity used for the fixed-c arithmetic; the last value the carbon
  /// service saw for this model.
  CarbonIntensitySample intensity;
  std::optional<PhaseEnergy> training;
  std::optional<PhaseEnergy> inference;

  bool ok() const { return status == RecordStatus::ok; }

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

enum class CarbonMode { fixed_c, time_weighted };

std::string_view to_string(CarbonMode mode);
CarbonMode parse_carbon_mode(std::string_view text);

struct EvaluationOptions {
  double sample_interval_s = kDefaultSampleIntervalS;
  CarbonMode carbon_mode = CarbonMode::fixed_c;
};

/// Reads the metrics document a workload wrote. Keys: accuracy, precision,
/// recall, f1, each optional and in [0, 1]. An empty file means no metrics.
PerformanceMetrics read_metrics(const std::filesystem::path& path);

/// Runs the training then inference phase of one model, each bracketed by a
/// meter session, and assembles its record. Workload and metering failures
/// produce a failed record instead of throwing. Throws ConfigError when the
/// meter cannot handle the spec or no intensity is available at all.
EvaluationRecord evaluate_model(const ModelSpec& spec, std::span<const DeviceCoefficients> devices,
                                MeterBackend& meter, IntensityProvider& intensity,
                                const EvaluationOptions& options = {});

/// Called after each model finishes, in suite order.
using RecordObserver = std::function<void(const EvaluationRecord&)>;

/// Evaluates every spec sequentially in declaration order. Duplicate ids, an
/// empty suite, or specs the meter cannot handle are rejected before anything
/// runs.
std::vector<EvaluationRecord> run_suite(std::span<const ModelSpec> specs,
                                        std::span<const DeviceCoefficients> devices,
                                        MeterBackend& meter, IntensityProvider& intensity,
                                        const EvaluationOptions& options = {},
                                        const RecordObserver& observer = {});

}  // namespace carbench

#endif  // CARBENCH_ORCHESTRATOR_HPP_
