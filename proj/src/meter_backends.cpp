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

#include "carbench/meter_backends.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "carbench/error.hpp"

namespace carbench {
namespace {

constexpr std::size_t kMaxSyntheticSamples = 4096;

class AnalyticalSource final : public SampleSource {
 public:
  AnalyticalSource(DeviceCoefficients device, std::optional<WorkloadCounts> counts, double interval)
      : device_(std::move(device)), counts_(counts), interval_(interval) {}

  bool clocked() const override { return false; }

  DeviceTrail finish(double elapsed_s, std::vector<EnergySample> /*observed*/) override {
    WorkloadCounts counts = counts_.value_or(WorkloadCounts{0.0, 0.0, elapsed_s});
    const double total_j = estimate_energy(counts, device_);

    DeviceTrail trail;
    trail.rule = IntegrationRule::analytical;
    trail.duration_s = counts.duration_s;
    trail.energy_j = total_j;

    const double t_end = counts.duration_s;
    if (t_end > 0.0) {
      // Work is spread uniformly over the declared duration.
      const double step = std::max(interval_, t_end / static_cast<double>(kMaxSyntheticSamples));
      const double rate_j_per_s = total_j / t_end;
      trail.samples.push_back({0.0, ReadingKind::cumulative_uj, 0.0, {}});
      for (std::size_t k = 1;; ++k) {
        const double t = step * static_cast<double>(k);
        if (!(t < t_end)) break;
        trail.samples.push_back({t, ReadingKind::cumulative_uj, rate_j_per_s * t * 1e6, {}});
      }
    }
    trail.samples.push_back({t_end, ReadingKind::cumulative_uj, total_j * 1e6, {}});
    return trail;
  }

 private:
  DeviceCoefficients device_;
  std::optional<WorkloadCounts> counts_;
  double interval_;
};

class CounterFileSource final : public SampleSource {
 public:
  CounterFileSource(std::filesystem::path energy_file, std::uint64_t max_range_uj)
      : energy_file_(std::move(energy_file)), max_range_uj_(max_range_uj) {}

  bool clocked() const override { return true; }

  EnergySample read(double elapsed_s) override {
    std::uint64_t value = 0;
    try {
      value = read_counter_file(energy_file_);
    } catch (const Error& e) {
      throw BackendError("counter_file", e.what());
    }
    if (value > max_range_uj_) {
      throw BackendError("counter_file", energy_file_.string() + " exceeds max_energy_range_uj");
    }
    return {elapsed_s, ReadingKind::cumulative_uj, static_cast<double>(value), {}};
  }

  DeviceTrail finish(double elapsed_s, std::vector<EnergySample> observed) override {
    DeviceTrail trail;
    trail.rule = IntegrationRule::counter_delta;
    trail.max_range_uj = max_range_uj_;
    trail.duration_s = elapsed_s;
    trail.samples = std::move(observed);
    trail.energy_j = integrate_counter_samples(trail.samples, max_range_uj_);
    return trail;
  }

 private:
  std::filesystem::path energy_file_;
  std::uint64_t max_range_uj_;
};

class TraceSource final : public SampleSource {
 public:
  explicit TraceSource(std::vector<EnergySample> samples) : samples_(std::move(samples)) {}

  bool clocked() const override { return false; }

  DeviceTrail finish(double /*elapsed_s*/, std::vector<EnergySample> /*observed*/) override {
    DeviceTrail trail;
    trail.samples = samples_;
    trail.duration_s = samples_.back().timestamp_s - samples_.front().timestamp_s;
    if (samples_.front().kind == ReadingKind::power_w) {
      trail.rule = IntegrationRule::trapezoid;
      trail.energy_j = integrate_power_samples(trail.samples);
    } else {
      trail.rule = IntegrationRule::counter_delta;
      trail.energy_j = integrate_counter_samples(trail.samples, 0);
    }
    return trail;
  }

 private:
  std::vector<EnergySample> samples_;
};

double parse_double(std::string_view token, const std::string& where) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(where + ": cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::uint64_t read_counter_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string text;
  in >> text;
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(path.string() + ": expected a decimal integer, got '" + text + "'");
  }
  return value;
}

std::vector<EnergySample> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read trace " + path.string());

  std::vector<EnergySample> samples;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string ts, value, mode, extra;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (!(fields >> ts >> value >> mode) || (fields >> extra)) {
      throw ValidationError(where + ": expected '<timestamp_s> <value> <mode>'");
    }
    samples.push_back({parse_double(ts, where), parse_reading_kind(mode),
                       parse_double(value, where), {}});
  }
  if (samples.empty()) throw ValidationError(path.string() + ": trace has no samples");

  const ReadingKind kind = samples.front().kind;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.kind != kind) throw ValidationError(path.string() + ": trace mixes reading modes");
    if (!std::isfinite(s.timestamp_s) || !std::isfinite(s.value) || s.value < 0.0) {
      throw ValidationError(path.string() + ": readings must be finite and >= 0");
    }
    if (i > 0 && !(s.timestamp_s > samples[i - 1].timestamp_s)) {
      throw ValidationError(path.string() + ": timestamps must be strictly increasing");
    }
  }
  if (kind == ReadingKind::power_w && samples.size() < 2) {
    throw ValidationError(path.string() + ": a power trace needs at least two samples");
  }
  const double origin = samples.front().timestamp_s;
  for (auto& s : samples) s.timestamp_s -= origin;
  return samples;
}

void AnalyticalBackend::check_compatible(const PhaseInput& input) const {
  if (input.trace_path) {
    throw ConfigError("analytical backend cannot meter trace workloads");
  }
  if (input.counts) input.counts->validate();
}

std::unique_ptr<SampleSource> AnalyticalBackend::open(const DeviceCoefficients& device,
                                                      const PhaseInput& input,
                                                      double sample_interval_s) {
  device.validate();
  return std::make_unique<AnalyticalSource>(device, input.counts, sample_interval_s);
}

CounterFileBackend::CounterFileBackend(std::filesystem::path root,
                                       std::map<std::string, std::filesystem::path> device_dirs)
    : root_(std::move(root)), device_dirs_(std::move(device_dirs)) {}

std::filesystem::path CounterFileBackend::device_dir(const std::string& device_id) const {
  if (auto it = device_dirs_.find(device_id); it != device_dirs_.end()) return it->second;
  return root_ / device_id;
}

void CounterFileBackend::check_compatible(const PhaseInput& input) const {
  if (input.counts || input.trace_path) {
    throw ConfigError("counter_file backend only meters child_process workloads");
  }
}

std::unique_ptr<SampleSource> CounterFileBackend::open(const DeviceCoefficients& device,
                                                       const PhaseInput& /*input*/,
                                                       double /*sample_interval_s*/) {
  const auto dir = device_dir(device.device_id);
  std::uint64_t max_range = 0;
  try {
    max_range = read_counter_file(dir / "max_energy_range_uj");
    (void)read_counter_file(dir / "energy_uj");
  } catch (const Error& e) {
    throw BackendError("counter_file", e.what());
  }
  if (max_range == 0) {
    throw BackendError("counter_file", (dir / "max_energy_range_uj").string() + " is zero");
  }
  return std::make_unique<CounterFileSource>(dir / "energy_uj", max_range);
}

TraceReplayBackend::TraceReplayBackend(std::optional<std::filesystem::path> default_trace)
    : default_trace_(std::move(default_trace)) {}

void TraceReplayBackend::check_compatible(const PhaseInput& input) const {
  if (input.counts) throw ConfigError("trace_replay backend cannot meter counts_only workloads");
  if (!input.trace_path && !default_trace_) {
    throw ConfigError("trace_replay backend needs a trace path");
  }
}

std::unique_ptr<SampleSource> TraceReplayBackend::open(const DeviceCoefficients& /*device*/,
                                                       const PhaseInput& input,
                                                       double /*sample_interval_s*/) {
  const auto path = input.trace_path ? *input.trace_path : default_trace_.value_or("");
  try {
    return std::make_unique<TraceSource>(load_trace(path));
  } catch (const IoError& e) {
    throw BackendError("trace_replay", e.what());
  }
}

}  // namespace carbench
