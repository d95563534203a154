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

#ifndef CARBENCH_METERING_HPP_
#define CARBENCH_METERING_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbench/energy_model.hpp"

namespace carbench {

inline constexpr double kDefaultSampleIntervalS = 1.0;

enum class Phase { training, inference };
enum class ReadingKind { power_w, cumulative_uj };

/// How a device trail turns into joules.
///  - trapezoid: power readings, trapezoidal rule.
///  - counter_delta: cumulative microjoule counter, per-step wrap correction.
///  - analytical: synthetic cumulative trail starting from zero; the last
///    reading is the model estimate.
enum class IntegrationRule { trapezoid, counter_delta, analytical };

std::string_view to_string(Phase phase);
std::string_view to_string(ReadingKind kind);
std::string_view to_string(IntegrationRule rule);
Phase parse_phase(std::string_view text);
ReadingKind parse_reading_kind(std::string_view text);
IntegrationRule parse_integration_rule(std::string_view text);

struct EnergySample {
  double timestamp_s = 0.0;  // monotonic seconds since session start
  ReadingKind kind = ReadingKind::power_w;
  double value = 0.0;  // watts or microjoules, per kind
  std::string device_id;

  friend bool operator==(const EnergySample&, const EnergySample&) = default;
};

struct DeviceTrail {
  std::string device_id;
  IntegrationRule rule = IntegrationRule::trapezoid;
  std::uint64_t max_range_uj = 0;  // 0: counter is not expected to wrap
  double duration_s = 0.0;
  double energy_j = 0.0;
  std::vector<EnergySample> samples;

  friend bool operator==(const DeviceTrail&, const DeviceTrail&) = default;
};

/// Monotonic bracket of a session. In-memory only; never serialized.
struct SessionWindow {
  std::chrono::steady_clock::time_point start{};
  std::chrono::steady_clock::time_point stop{};
};

struct PhaseEnergy {
  Phase phase = Phase::training;
  double energy_j = 0.0;
  double duration_s = 0.0;
  std::string backend_id;
  std::vector<DeviceTrail> trails;  // one per metered device
  SessionWindow window;

  /// Compares everything except the wall-clock window.
  friend bool operator==(const PhaseEnergy& a, const PhaseEnergy& b) {
    return a.phase == b.phase && a.energy_j == b.energy_j && a.duration_s == b.duration_s &&
           a.backend_id == b.backend_id && a.trails == b.trails;
  }
};

/// Trapezoidal integral of power readings, in joules. Needs >= 2 samples
/// with strictly increasing timestamps.
double integrate_power_samples(std::span<const EnergySample> samples);

/// Counter delta assuming at most one wrap between the two readings.
std::uint64_t unwrap_counter_delta(std::uint64_t prev_uj, std::uint64_t curr_uj,
                                   std::uint64_t max_range_uj);

/// Joules accumulated by a cumulative microjoule trail. With max_range_uj == 0
/// the counter must be nondecreasing.
double integrate_counter_samples(std::span<const EnergySample> samples,
                                 std::uint64_t max_range_uj);

/// Re-integrates a trail under its declared rule.
double integrate_trail(const DeviceTrail& trail);

/// Workload-side facts a backend may need. Exactly one of counts/trace_path is
/// set for counts-only and trace workloads; neither for child processes.
struct PhaseInput {
  std::optional<WorkloadCounts> counts;
  std::optional<std::filesystem::path> trace_path;
};

/// One device's reading source inside a session.
class SampleSource {
 public:
  virtual ~SampleSource() = default;

  /// Clocked sources are polled by the session sampler; the others build
  /// their trail when the session stops.
  virtual bool clocked() const = 0;

  /// Reads the device now. Only called on clocked sources.
  virtual EnergySample read(double elapsed_s);

  /// Produces the finished trail. `observed` holds the polled samples of a
  /// clocked source and is empty otherwise.
  virtual DeviceTrail finish(double elapsed_s, std::vector<EnergySample> observed) = 0;
};

class MeterSession;

class MeterBackend {
 public:
  virtual ~MeterBackend() = default;

  virtual std::string id() const = 0;

  /// Throws ConfigError if this backend cannot meter the given phase input.
  virtual void check_compatible(const PhaseInput& input) const = 0;

  /// Opens a source for one device. Throws BackendError when the underlying
  /// readings are unavailable.
  virtual std::unique_ptr<SampleSource> open(const DeviceCoefficients& device,
                                             const PhaseInput& input,
                                             double sample_interval_s) = 0;

 private:
  friend class MeterSession;
  friend MeterSession start_measurement(MeterBackend&, std::span<const DeviceCoefficients>,
                                        double, const PhaseInput&);
  void acquire(const std::vector<std::string>& device_ids);
  void release(const std::vector<std::string>& device_ids) noexcept;

  std::mutex active_mutex_;
  std::set<std::string> active_devices_;
};

/// A running measurement. Move-only; sampling runs on its own thread until
/// stop(). Destroying an unstopped session discards its samples.
class MeterSession {
 public:
  MeterSession(MeterSession&&) noexcept;
  MeterSession& operator=(MeterSession&&) noexcept;
  MeterSession(const MeterSession&) = delete;
  MeterSession& operator=(const MeterSession&) = delete;
  ~MeterSession();

  bool active() const noexcept;
  std::chrono::steady_clock::time_point started_at() const;

  /// Takes the final sample, joins the sampler and integrates every trail.
  /// A second call throws UsageError.
  PhaseEnergy stop(Phase phase);

 private:
  struct State;
  explicit MeterSession(std::unique_ptr<State> state);
  friend MeterSession start_measurement(MeterBackend&, std::span<const DeviceCoefficients>,
                                        double, const PhaseInput&);

  std::unique_ptr<State> state_;
};

/// Starts sampling every device in `devices`. The first sample is taken
/// before this returns.
MeterSession start_measurement(MeterBackend& backend, std::span<const DeviceCoefficients> devices,
                               double sample_interval_s = kDefaultSampleIntervalS,
                               const PhaseInput& input = {});

MeterSession start_measurement(MeterBackend& backend, const DeviceCoefficients& device,
                               double sample_interval_s = kDefaultSampleIntervalS,
                               const PhaseInput& input = {});

}  // namespace carbench

#endif  // CARBENCH_METERING_HPP_
