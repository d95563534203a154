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

#ifndef CARBENCH_CLI_HPP_
#define CARBENCH_CLI_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "carbench/metrics.hpp"
#include "carbench/orchestrator.hpp"

namespace carbench::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNoResults = 3,  // every model failed, or no record carries the metric
  kExitIo = 4,
};

/// Environment entry naming the default output directory.
inline constexpr std::string_view kOutputDirEnv = "AI_CARE_OUT";

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::vector<double>> alphas;
  std::optional<double> intensity_g_per_kwh;  // forces the fixed provider
  std::optional<double> sample_interval_s;
  RecordObserver observer;  // test hook, called after each model
};

struct ScoreOptions {
  std::filesystem::path records;
  std::optional<std::vector<double>> alphas;  // default: alphas recorded by the run
  std::optional<Metric> metric;               // default: every metric
  std::optional<std::filesystem::path> out;
};

struct FrontierOptions {
  std::filesystem::path records;
  Metric metric = Metric::accuracy;
  std::optional<std::filesystem::path> out;
};

/// Output directory precedence: flag, then config file, then AI_CARE_OUT,
/// then ./out.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::optional<std::filesystem::path>& from_config);

/// Parses "0,0.5,1" style alpha lists.
std::vector<double> parse_alpha_list(std::string_view text);

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_score(const ScoreOptions& options, std::ostream& out, std::ostream& err);
int cmd_frontier(const FrontierOptions& options, std::ostream& out, std::ostream& err);

}  // namespace carbench::cli

#endif  // CARBENCH_CLI_HPP_
