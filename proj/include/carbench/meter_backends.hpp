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

#ifndef CARBENCH_METER_BACKENDS_HPP_
#define CARBENCH_METER_BACKENDS_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carbench/metering.hpp"

namespace carbench {

/// Evaluates the analytical energy model instead of reading hardware.
///
/// Counts-only phases get a synthetic cumulative trail spanning the declared
/// duration. Child-process phases have no declared counts, so they are
/// charged static power over the measured wall time.
class AnalyticalBackend final : public MeterBackend {
 public:
  std::string id() const override { return "analytical"; }
  void check_compatible(const PhaseInput& input) const override;
  std::unique_ptr<SampleSource> open(const DeviceCoefficients& device, const PhaseInput& input,
                                     double sample_interval_s) override;
};

/// Reads powercap-style counter files: `<dir>/energy_uj` and
/// `<dir>/max_energy_range_uj`, with `<dir>` = `<root>/<device_id>` unless
/// overridden per device.
class CounterFileBackend final : public MeterBackend {
 public:
  explicit CounterFileBackend(std::filesystem::path root,
                              std::map<std::string, std::filesystem::path> device_dirs = {});

  std::string id() const override { return "counter_file"; }
  void check_compatible(const PhaseInput& input) const override;
  std::unique_ptr<SampleSource> open(const DeviceCoefficients& device, const PhaseInput& input,
                                     double sample_interval_s) override;

  std::filesystem::path device_dir(const std::string& device_id) const;

 private:
  std::filesystem::path root_;
  std::map<std::string, std::filesystem::path> device_dirs_;
};

/// Replays a recorded trail from a text file. Readings ignore the wall clock,
/// so replays are deterministic.
class TraceReplayBackend final : public MeterBackend {
 public:
  /// `default_trace` is used for phases that do not name their own trace.
  explicit TraceReplayBackend(std::optional<std::filesystem::path> default_trace = std::nullopt);

  std::string id() const override { return "trace_replay"; }
  void check_compatible(const PhaseInput& input) const override;
  std::unique_ptr<SampleSource> open(const DeviceCoefficients& device, const PhaseInput& input,
                                     double sample_interval_s) override;

 private:
  std::optional<std::filesystem::path> default_trace_;
};

/// Parses `<timestamp_s> <value> <mode>` lines. Blank lines and lines starting
/// with '#' are skipped. Timestamps are rebased so the first sample is at 0.
std::vector<EnergySample> load_trace(const std::filesystem::path& path);

/// Reads a decimal unsigned integer file such as `energy_uj`.
std::uint64_t read_counter_file(const std::filesystem::path& path);

}  // namespace carbench

#endif  // CARBENCH_METER_BACKENDS_HPP_
