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

#ifndef CARBENCH_CONFIG_HPP_
#define CARBENCH_CONFIG_HPP_

#include <filesystem>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carbench/carbon.hpp"
#include "carbench/meter_backends.hpp"
#include "carbench/orchestrator.hpp"
#include "carbench/report.hpp"

namespace carbench {

inline constexpr int kConfigSchemaVersion = 1;

struct MeterConfig {
  std::string backend = "analytical";  // analytical | counter_file | trace_replay
  double sample_interval_s = kDefaultSampleIntervalS;
  std::filesystem::path counter_root = "/sys/class/powercap";
  std::map<std::string, std::filesystem::path> device_dirs;
  std::optional<std::filesystem::path> trace_path;
};

struct IntensityConfig {
  std::string provider = "fixed";  // fixed | file | remote
  double value_g_per_kwh = kDefaultIntensityGPerKwh;
  std::filesystem::path file;
  std::string url;
  double poll_interval_s = kDefaultRemotePollIntervalS;
  double timeout_s = 5.0;
  std::optional<double> fallback_g_per_kwh = kDefaultIntensityGPerKwh;
  CarbonMode mode = CarbonMode::fixed_c;
};

struct SuiteConfig {
  int schema_version = kConfigSchemaVersion;
  bool publishable = false;
  std::vector<DeviceCoefficients> devices;
  bool devices_configured = false;  // false: illustrative defaults in use
  MeterConfig meter;
  IntensityConfig intensity;
  std::vector<double> alphas{kDefaultScasAlpha};
  std::optional<std::filesystem::path> output_dir;
  std::vector<ModelSpec> models;

  /// Full validation; throws ConfigError.
  void validate() const;
};

/// Parses a config document. Relative paths resolve against `base_dir`.
/// Unknown keys are rejected.
SuiteConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
SuiteConfig load_config(const std::filesystem::path& path);

std::unique_ptr<MeterBackend> make_meter(const MeterConfig& config);
std::unique_ptr<IntensityProvider> make_intensity_provider(const IntensityConfig& config);

SuiteMetadata describe(const SuiteConfig& config);

}  // namespace carbench

#endif  // CARBENCH_CONFIG_HPP_
