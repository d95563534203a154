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

#include "carbench/metering.hpp"

#include <cmath>
#include <condition_variable>
#include <exception>
#include <thread>
#include <utility>

#include "carbench/error.hpp"

namespace carbench {

using Clock = std::chrono::steady_clock;

std::string_view to_string(Phase phase) {
  return phase == Phase::training ? "training" : "inference";
}

std::string_view to_string(ReadingKind kind) {
  return kind == ReadingKind::power_w ? "power_w" : "cumulative_uj";
}

std::string_view to_string(IntegrationRule rule) {
  switch (rule) {
    case IntegrationRule::trapezoid: return "trapezoid";
    case IntegrationRule::counter_delta: return "counter_delta";
    case IntegrationRule::analytical: return "analytical";
  }
  return "trapezoid";
}

Phase parse_phase(std::string_view text) {
  if (text == "training") return Phase::training;
  if (text == "inference") return Phase::inference;
  throw ValidationError("unknown phase '" + std::string(text) + "'");
}

ReadingKind parse_reading_kind(std::string_view text) {
  if (text == "power_w") return ReadingKind::power_w;
  if (text == "cumulative_uj") return ReadingKind::cumulative_uj;
  throw ValidationError("unknown reading mode '" + std::string(text) + "'");
}

IntegrationRule parse_integration_rule(std::string_view text) {
  if (text == "trapezoid") return IntegrationRule::trapezoid;
  if (text == "counter_delta") return IntegrationRule::counter_delta;
  if (text == "analytical") return IntegrationRule::analytical;
  throw ValidationError("unknown integration rule '" + std::string(text) + "'");
}

namespace {

void check_trail_shape(std::span<const EnergySample> samples, ReadingKind expected) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.kind != expected) {
      throw ValidationError("sample " + std::to_string(i) + " has reading mode " +
                            std::string(to_string(s.kind)) + ", expected " +
                            std::string(to_string(expected)));
    }
    if (!std::isfinite(s.timestamp_s) || !std::isfinite(s.value) || s.value < 0.0) {
      throw ValidationError("sample " + std::to_string(i) + " is not finite and >= 0");
    }
    if (i > 0 && !(s.timestamp_s > samples[i - 1].timestamp_s)) {
      throw ValidationError("sample timestamps must be strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
}

std::uint64_t as_counter(double value) {
  if (value != std::floor(value) || value > 9007199254740992.0) {
    throw ValidationError("counter reading is not an exact integer");
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

double integrate_power_samples(std::span<const EnergySample> samples) {
  if (samples.size() < 2) {
    throw ValidationError("power integration needs at least two samples");
  }
  check_trail_shape(samples, ReadingKind::power_w);
  double joules = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].timestamp_s - samples[i - 1].timestamp_s;
    joules += 0.5 * (samples[i - 1].value + samples[i].value) * dt;
  }
  return joules;
}

std::uint64_t unwrap_counter_delta(std::uint64_t prev_uj, std::uint64_t curr_uj,
                                   std::uint64_t max_range_uj) {
  if (max_range_uj == 0) throw ValidationError("max_range_uj must be > 0");
  if (prev_uj > max_range_uj || curr_uj > max_range_uj) {
    throw ValidationError("counter reading exceeds max_range_uj");
  }
  if (curr_uj >= prev_uj) return curr_uj - prev_uj;
  return max_range_uj - prev_uj + curr_uj;
}

double integrate_counter_samples(std::span<const EnergySample> samples,
                                 std::uint64_t max_range_uj) {
  if (samples.empty()) throw ValidationError("counter trail is empty");
  check_trail_shape(samples, ReadingKind::cumulative_uj);

  bool wrapped = false;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].value < samples[i - 1].value) {
      if (max_range_uj == 0) {
        throw ValidationError("cumulative counter decreased at index " + std::to_string(i) +
                              " and no wrap range is known");
      }
      wrapped = true;
    }
  }
  if (!wrapped) {
    return (samples.back().value - samples.front().value) / 1e6;
  }

  std::uint64_t total_uj = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    total_uj += unwrap_counter_delta(as_counter(samples[i - 1].value),
                                     as_counter(samples[i].value), max_range_uj);
  }
  return static_cast<double>(total_uj) / 1e6;
}

double integrate_trail(const DeviceTrail& trail) {
  switch (trail.rule) {
    case IntegrationRule::trapezoid:
      return integrate_power_samples(trail.samples);
    case IntegrationRule::counter_delta:
      return integrate_counter_samples(trail.samples, trail.max_range_uj);
    case IntegrationRule::analytical:
      if (trail.samples.empty()) throw ValidationError("analytical trail is empty");
      check_trail_shape(trail.samples, ReadingKind::cumulative_uj);
      return trail.samples.back().value / 1e6;
  }
  throw ValidationError("unknown integration rule");
}

EnergySample SampleSource::read(double /*elapsed_s*/) {
  throw UsageError("read() called on an unclocked sample source");
}

void MeterBackend::acquire(const std::vector<std::string>& device_ids) {
  std::lock_guard lock(active_mutex_);
  for (const auto& id : device_ids) {
    if (active_devices_.contains(id)) {
      throw UsageError("a session is already active on backend '" + this->id() +
                       "' for device '" + id + "'");
    }
  }
  active_devices_.insert(device_ids.begin(), device_ids.end());
}

void MeterBackend::release(const std::vector<std::string>& device_ids) noexcept {
  std::lock_guard lock(active_mutex_);
  for (const auto& id : device_ids) active_devices_.erase(id);
}

struct MeterSession::State {
  MeterBackend* backend = nullptr;
  std::vector<std::string> device_ids;
  std::vector<std::unique_ptr<SampleSource>> sources;
  bool clocked = false;
  double interval_s = kDefaultSampleIntervalS;
  Clock::time_point start;

  std::mutex mutex;
  std::condition_variable_any wake;
  std::vector<std::vector<EnergySample>> observed;
  std::exception_ptr sampler_error;
  std::jthread sampler;
  bool stopped = false;

  double elapsed(Clock::time_point now) const {
    return std::chrono::duration<double>(now - start).count();
  }

  // Caller holds no lock; readings happen outside it, appends inside.
  void sample_all(double t) {
    std::vector<EnergySample> batch;
    batch.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
      EnergySample s = sources[i]->read(t);
      s.timestamp_s = t;
      s.device_id = device_ids[i];
      batch.push_back(std::move(s));
    }
    std::lock_guard lock(mutex);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto& trail = observed[i];
      if (!trail.empty() && !(batch[i].timestamp_s > trail.back().timestamp_s)) {
        trail.back() = std::move(batch[i]);
      } else {
        trail.push_back(std::move(batch[i]));
      }
    }
  }

  void run_sampler(std::stop_token token) {
    const auto step = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(interval_s));
    for (std::int64_t k = 1;; ++k) {
      const auto deadline = start + step * k;
      {
        std::unique_lock lock(mutex);
        if (wake.wait_until(lock, token, deadline, [] { return false; }) || token.stop_requested()) {
          return;
        }
      }
      try {
        sample_all(elapsed(Clock::now()));
      } catch (...) {
        std::lock_guard lock(mutex);
        sampler_error = std::current_exception();
        return;
      }
    }
  }

  void shutdown() noexcept {
    if (sampler.joinable()) {
      sampler.request_stop();
      sampler.join();
    }
    backend->release(device_ids);
  }
};

MeterSession::MeterSession(std::unique_ptr<State> state) : state_(std::move(state)) {}
MeterSession::MeterSession(MeterSession&&) noexcept = default;
MeterSession& MeterSession::operator=(MeterSession&& other) noexcept {
  if (this != &other) {
    if (state_ && !state_->stopped) state_->shutdown();
    state_ = std::move(other.state_);
  }
  return *this;
}

MeterSession::~MeterSession() {
  if (state_ && !state_->stopped) state_->shutdown();
}

bool MeterSession::active() const noexcept { return state_ && !state_->stopped; }

std::chrono::steady_clock::time_point MeterSession::started_at() const {
  if (!state_) throw UsageError("moved-from meter session");
  return state_->start;
}

PhaseEnergy MeterSession::stop(Phase phase) {
  if (!state_) throw UsageError("moved-from meter session");
  if (state_->stopped) throw UsageError("meter session already stopped");
  State& st = *state_;
  st.stopped = true;

  const auto stop_time = Clock::now();
  const double t_stop = st.elapsed(stop_time);
  if (st.sampler.joinable()) {
    st.sampler.request_stop();
    st.sampler.join();
  }

  struct Release {
    State& st;
    ~Release() { st.backend->release(st.device_ids); }
  } release{st};

  if (st.sampler_error) std::rethrow_exception(st.sampler_error);
  if (st.clocked) st.sample_all(t_stop);

  PhaseEnergy result;
  result.phase = phase;
  result.backend_id = st.backend->id();
  result.window = {st.start, stop_time};
  for (std::size_t i = 0; i < st.sources.size(); ++i) {
    DeviceTrail trail = st.sources[i]->finish(t_stop, std::move(st.observed[i]));
    trail.device_id = st.device_ids[i];
    for (auto& s : trail.samples) s.device_id = trail.device_id;
    result.energy_j += trail.energy_j;
    result.duration_s = std::max(result.duration_s, trail.duration_s);
    result.trails.push_back(std::move(trail));
  }
  return result;
}

MeterSession start_measurement(MeterBackend& backend, std::span<const DeviceCoefficients> devices,
                               double sample_interval_s, const PhaseInput& input) {
  if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s)) {
    throw ValidationError("sample_interval_s must be > 0");
  }
  if (devices.empty()) throw ValidationError("a measurement needs at least one device");

  auto st = std::make_unique<MeterSession::State>();
  st->backend = &backend;
  st->interval_s = sample_interval_s;
  for (const auto& d : devices) st->device_ids.push_back(d.device_id);

  backend.check_compatible(input);
  backend.acquire(st->device_ids);
  try {
    for (const auto& d : devices) {
      st->sources.push_back(backend.open(d, input, sample_interval_s));
    }
    st->clocked = st->sources.front()->clocked();
    st->observed.resize(st->sources.size());
    st->start = Clock::now();
    if (st->clocked) {
      st->sample_all(0.0);
      st->sampler = std::jthread([raw = st.get()](std::stop_token token) {
        raw->run_sampler(std::move(token));
      });
    }
  } catch (...) {
    backend.release(st->device_ids);
    throw;
  }
  return MeterSession(std::move(st));
}

MeterSession start_measurement(MeterBackend& backend, const DeviceCoefficients& device,
                               double sample_interval_s, const PhaseInput& input) {
  return start_measurement(backend, std::span<const DeviceCoefficients>(&device, 1),
                           sample_interval_s, input);
}

}  // namespace carbench
