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

#ifndef CARBENCH_REPORT_HPP_
#define CARBENCH_REPORT_HPP_

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbench/orchestrator.hpp"
#include "carbench/scoring.hpp"
#include "carbench/svg.hpp"

namespace carbench {

inline constexpr std::string_view kToolName = "carbench";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Everything a reader needs to recompute energies, emissions and scores.
struct SuiteMetadata {
  std::string tool_version{kToolVersion};
  bool publishable = false;
  std::string coefficients_source = "configured";  // or "illustrative"
  std::vector<DeviceCoefficients> devices;
  std::string meter_backend = "analytical";
  double sample_interval_s = kDefaultSampleIntervalS;
  std::string intensity_provider = "fixed";
  std::optional<double> intensity_configured_g_per_kwh = kDefaultIntensityGPerKwh;
  CarbonMode carbon_mode = CarbonMode::fixed_c;
  std::vector<double> alphas{kDefaultScasAlpha};

  friend bool operator==(const SuiteMetadata&, const SuiteMetadata&) = default;
};

struct ScoreTable {
  Metric metric = Metric::accuracy;
  double alpha = kDefaultScasAlpha;
  std::vector<ScoreEntry> entries;  // ranked
};

struct MetricTradeoff {
  Metric metric = Metric::accuracy;
  std::vector<TradeoffPoint> points;    // carbon-ascending
  std::vector<TradeoffPoint> frontier;  // carbon-ascending
};

struct ReportBundle {
  SuiteMetadata metadata;
  std::vector<EvaluationRecord> records;  // model_id order
  std::vector<Metric> metrics;
  std::vector<ScoreTable> scores;  // metric-major, alphas in metadata order
  std::vector<MetricTradeoff> tradeoffs;
  std::vector<Exclusion> exclusions;
  std::vector<std::string> warnings;

  const MetricTradeoff* tradeoff(Metric metric) const;
  const ScoreTable* score_table(Metric metric, double alpha) const;
};

/// Scores, frontiers and exclusions for `metrics` over the ok records.
/// Failed records are excluded from every metric.
ReportBundle build_bundle(SuiteMetadata metadata, std::vector<EvaluationRecord> records,
                          std::span<const Metric> metrics = kAllMetrics);

std::string emit_json(const ReportBundle& bundle);
std::string emit_csv(const ReportBundle& bundle);

/// Tradeoff plot for one metric of the bundle.
std::string emit_tradeoff_svg(const ReportBundle& bundle, Metric metric,
                              const PlotStyle& style = {});
/// Score grid for the first alpha of the bundle.
std::string emit_score_grid(const ReportBundle& bundle, const PlotStyle& style = {});

/// Writes report.json, report.csv, tradeoff_<metric>.svg and score_grid.svg.
void write_report_artifacts(const ReportBundle& bundle, const std::filesystem::path& out_dir,
                            const PlotStyle& style = {});

// Raw records file: measurement output kept separate from scoring.

inline constexpr std::string_view kRecordsFileName = "records.json";

nlohmann::json to_json(const SuiteMetadata& metadata);
SuiteMetadata metadata_from_json(const nlohmann::json& doc);
/// With `with_trails` the phase sample trails are included.
nlohmann::json to_json(const EvaluationRecord& record, bool with_trails);
EvaluationRecord record_from_json(const nlohmann::json& doc);

struct RecordsFile {
  SuiteMetadata metadata;
  std::vector<EvaluationRecord> records;
};

std::string emit_records_file(const SuiteMetadata& metadata,
                              std::span<const EvaluationRecord> records);
RecordsFile parse_records_file(std::string_view text);
RecordsFile load_records_file(const std::filesystem::path& path);

/// Writes `bytes` to `path`, throwing IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace carbench

#endif  // CARBENCH_REPORT_HPP_
