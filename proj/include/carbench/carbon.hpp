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

#ifndef CARBENCH_CARBON_HPP_
#define CARBENCH_CARBON_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "carbench/metering.hpp"

namespace carbench {

/// Average grid intensity used when nothing else is configured, gCO2/kWh.
inline constexpr double kDefaultIntensityGPerKwh = 400.0;
inline constexpr double kDefaultRemotePollIntervalS = 60.0;

enum class IntensitySource { fixed, file, remote, fallback };

std::string_view to_string(IntensitySource source);
IntensitySource parse_intensity_source(std::string_view text);

struct CarbonIntensitySample {
  double value_g_per_kwh = kDefaultIntensityGPerKwh;
  double timestamp_s = 0.0;  // provider-defined; 0 for the fixed provider
  IntensitySource source = IntensitySource::fixed;

  void validate() const;

  friend bool operator==(const CarbonIntensitySample&, const CarbonIntensitySample&) = default;
};

struct EmissionBreakdown {
  double c_training_g = 0.0;
  double c_inference_g = 0.0;
  double c_total_g = 0.0;

  static EmissionBreakdown from_phases(double training_g, double inference_g);

  friend bool operator==(const EmissionBreakdown&, const EmissionBreakdown&) = default;
};

/// Grams of CO2 for `energy_kwh` at a constant intensity.
double emissions(double energy_kwh, const CarbonIntensitySample& intensity);
double emissions(double energy_kwh, double intensity_g_per_kwh);

/// Applies a left-hold intensity series to the phase's per-interval energy.
///
/// Series timestamps share the time base of the phase trail (seconds since
/// session start). Intervals are split at intensity changes; instants before
/// the first series entry use the first entry. A one-element series reduces
/// to emissions(joules_to_kwh(phase.energy_j), series[0]).
double emissions_time_weighted(const PhaseEnergy& phase,
                               std::span<const CarbonIntensitySample> series);

/// An intensity value observed at a point on the steady clock.
struct TimedIntensity {
  std::chrono::steady_clock::time_point at;
  CarbonIntensitySample sample;
};

class IntensityProvider {
 public:
  virtual ~IntensityProvider() = default;

  /// "fixed", "file" or "remote".
  virtual std::string id() const = 0;

  /// Current intensity. Never blocks on the network.
  virtual CarbonIntensitySample fetch() = 0;

  /// Values in effect during [from, to], including the one holding at
  /// `from`. The default reports a single fetch() stamped at `from`.
  virtual std::vector<TimedIntensity> observed(std::chrono::steady_clock::time_point from,
                                               std::chrono::steady_clock::time_point to);
};

CarbonIntensitySample fetch_intensity(IntensityProvider& provider);

class FixedIntensityProvider final : public IntensityProvider {
 public:
  explicit FixedIntensityProvider(double g_per_kwh = kDefaultIntensityGPerKwh);
  std::string id() const override { return "fixed"; }
  CarbonIntensitySample fetch() override;

 private:
  double value_;
};

/// Epoch seconds, injectable for tests.
using EpochClock = std::function<double()>;
double system_epoch_seconds();

/// Serves `<timestamp_s> <g_per_kwh>` pairs from a sorted text file, picking
/// the entry at or before the current epoch time.
class FileIntensityProvider final : public IntensityProvider {
 public:
  FileIntensityProvider(const std::filesystem::path& path, std::optional<double> fallback_g_per_kwh,
                        EpochClock clock = system_epoch_seconds);

  std::string id() const override { return "file"; }
  CarbonIntensitySample fetch() override;
  std::vector<TimedIntensity> observed(std::chrono::steady_clock::time_point from,
                                       std::chrono::steady_clock::time_point to) override;

  const std::vector<CarbonIntensitySample>& entries() const noexcept { return entries_; }

 private:
  CarbonIntensitySample at(double epoch_s) const;

  std::vector<CarbonIntensitySample> entries_;
  std::optional<double> fallback_;
  EpochClock clock_;
};

struct RemoteIntensityOptions {
  std::string url;  // http://host[:port]/path
  double poll_interval_s = kDefaultRemotePollIntervalS;
  double timeout_s = 5.0;
  std::optional<double> fallback_g_per_kwh = kDefaultIntensityGPerKwh;
};

/// Polls an HTTP endpoint returning {"carbon_intensity": g/kWh, "timestamp":
/// epoch seconds} on a background thread and serves the cached value.
///
/// When the latest poll failed the cached value is returned tagged fallback;
/// with no cache the configured fixed fallback is used, also tagged fallback.
class RemoteIntensityProvider final : public IntensityProvider {
 public:
  /// Starts the poller and waits for the first poll to finish.
  explicit RemoteIntensityProvider(RemoteIntensityOptions options);
  ~RemoteIntensityProvider() override;

  std::string id() const override { return "remote"; }
  CarbonIntensitySample fetch() override;
  std::vector<TimedIntensity> observed(std::chrono::steady_clock::time_point from,
                                       std::chrono::steady_clock::time_point to) override;

  std::uint64_t poll_count() const;
  /// Blocks until at least `count` polls have completed or `timeout` passes.
  bool await_poll_count(std::uint64_t count, std::chrono::milliseconds timeout) const;

 private:
  struct Endpoint {
    std::string host;
    int port = 80;
    std::string path = "/";
  };
  static Endpoint parse_url(const std::string& url);

  void poll_once();
  void run(std::stop_token token);
  CarbonIntensitySample current_locked() const;

  RemoteIntensityOptions options_;
  Endpoint endpoint_;

  mutable std::mutex mutex_;
  mutable std::condition_variable_any changed_;
  std::optional<CarbonIntensitySample> cache_;
  bool last_poll_ok_ = false;
  std::uint64_t polls_ = 0;
  std::vector<TimedIntensity> history_;
  std::jthread poller_;
};

}  // namespace carbench

#endif  // CARBENCH_CARBON_HPP_
