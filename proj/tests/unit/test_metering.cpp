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

#include <doctest.h>

#include <atomic>
#include <thread>

#include "carbench/error.hpp"
#include "carbench/metering.hpp"
#include "support.hpp"

using namespace carbench;
using carbench::testing::Gen;
using carbench::testing::rel_close;

namespace {

std::vector<EnergySample> power(std::initializer_list<std::pair<double, double>> pts) {
  std::vector<EnergySample> out;
  for (auto [t, w] : pts) out.push_back({t, ReadingKind::power_w, w, "d0"});
  return out;
}

std::vector<EnergySample> counter(std::initializer_list<std::pair<double, double>> pts) {
  std::vector<EnergySample> out;
  for (auto [t, uj] : pts) out.push_back({t, ReadingKind::cumulative_uj, uj, "d0"});
  return out;
}

std::vector<EnergySample> random_power_trail(Gen& g, int n) {
  std::vector<EnergySample> out;
  double t = g.uniform(0, 100);
  for (int i = 0; i < n; ++i) {
    out.push_back({t, ReadingKind::power_w, g.uniform(0, 400), "d0"});
    t += g.uniform(1e-3, 5);
  }
  return out;
}

// Clocked source reporting a fixed wattage; counts how often it is read.
class ConstantPowerSource final : public SampleSource {
 public:
  ConstantPowerSource(double watts, std::atomic<int>& reads, bool fail_after_first)
      : watts_(watts), reads_(reads), fail_after_first_(fail_after_first) {}
  bool clocked() const override { return true; }
  EnergySample read(double elapsed_s) override {
    if (fail_after_first_ && reads_.load() > 0) throw BackendError("fake", "sensor vanished");
    ++reads_;
    return {elapsed_s, ReadingKind::power_w, watts_, ""};
  }
  DeviceTrail finish(double elapsed_s, std::vector<EnergySample> observed) override {
    DeviceTrail trail;
    trail.rule = IntegrationRule::trapezoid;
    trail.duration_s = elapsed_s;
    trail.samples = std::move(observed);
    trail.energy_j = trail.samples.size() < 2 ? 0.0 : integrate_power_samples(trail.samples);
    return trail;
  }

 private:
  double watts_;
  std::atomic<int>& reads_;
  bool fail_after_first_;
};

class FakeBackend final : public MeterBackend {
 public:
  explicit FakeBackend(bool fail_after_first = false) : fail_after_first_(fail_after_first) {}
  std::string id() const override { return "fake"; }
  void check_compatible(const PhaseInput&) const override {}
  std::unique_ptr<SampleSource> open(const DeviceCoefficients&, const PhaseInput&, double) override {
    return std::make_unique<ConstantPowerSource>(10.0, reads, fail_after_first_);
  }
  std::atomic<int> reads{0};

 private:
  bool fail_after_first_;
};

const DeviceCoefficients kDev{"d0", DeviceKind::cpu, 0, 0, 1};

}  // namespace

TEST_SUITE("metering") {
  TEST_CASE("trapezoid examples") {
    CHECK(integrate_power_samples(power({{0, 10}, {2, 10}})) == 20.0);
    CHECK(integrate_power_samples(power({{0, 0}, {1, 10}, {2, 0}})) == 10.0);
    CHECK_THROWS_AS(integrate_power_samples(power({{0, 10}})), ValidationError);
    CHECK_THROWS_AS(integrate_power_samples(power({{1, 10}, {1, 10}})), ValidationError);
    CHECK_THROWS_AS(integrate_power_samples(power({{2, 10}, {1, 10}})), ValidationError);
    CHECK_THROWS_AS(integrate_power_samples(counter({{0, 10}, {1, 20}})), ValidationError);
  }

  TEST_CASE("counter unwrap examples") {
    CHECK(unwrap_counter_delta(100, 250, 1000) == 150);
    CHECK(unwrap_counter_delta(900, 50, 1000) == 150);
    CHECK(unwrap_counter_delta(321, 321, 1000) == 0);
    CHECK_THROWS_AS(unwrap_counter_delta(1001, 5, 1000), ValidationError);
    CHECK_THROWS_AS(unwrap_counter_delta(5, 1001, 1000), ValidationError);
    CHECK_THROWS_AS(unwrap_counter_delta(1, 2, 0), ValidationError);
  }

  TEST_CASE("counter trails") {
    CHECK(integrate_counter_samples(counter({{0, 1'000'000}, {1, 4'600'000}}), 0) == 3.6);
    // 900 -> 50 wraps once, then 50 -> 400.
    CHECK(integrate_counter_samples(counter({{0, 900}, {1, 50}, {2, 400}}), 1000) == 500e-6);
    CHECK_THROWS_AS(integrate_counter_samples(counter({{0, 900}, {1, 50}}), 0), ValidationError);
    CHECK_THROWS_AS(integrate_counter_samples({}, 0), ValidationError);
    CHECK(integrate_counter_samples(counter({{0, 42}}), 0) == 0.0);
  }

  TEST_CASE("integrate_trail dispatches on the rule") {
    DeviceTrail t;
    t.rule = IntegrationRule::trapezoid;
    t.samples = power({{0, 10}, {2, 10}});
    CHECK(integrate_trail(t) == 20.0);
    t.rule = IntegrationRule::counter_delta;
    t.samples = counter({{0, 1'000'000}, {1, 4'600'000}});
    CHECK(integrate_trail(t) == 3.6);
    t.rule = IntegrationRule::analytical;
    t.samples = counter({{0, 0}, {2, 21'500'000}});
    CHECK(integrate_trail(t) == 21.5);
  }

  TEST_CASE("enum names round-trip") {
    for (auto p : {Phase::training, Phase::inference}) CHECK(parse_phase(to_string(p)) == p);
    for (auto k : {ReadingKind::power_w, ReadingKind::cumulative_uj}) {
      CHECK(parse_reading_kind(to_string(k)) == k);
    }
    for (auto r : {IntegrationRule::trapezoid, IntegrationRule::counter_delta, IntegrationRule::analytical}) {
      CHECK(parse_integration_rule(to_string(r)) == r);
    }
    CHECK_THROWS_AS(parse_phase("warmup"), ValidationError);
  }

  TEST_CASE("property: translation invariance") {
    Gen g(101);
    for (int i = 0; i < 300; ++i) {
      auto trail = random_power_trail(g, g.integer(2, 40));
      const double base = integrate_power_samples(trail);
      const double shift = g.uniform(-50, 1e4);
      for (auto& s : trail) s.timestamp_s += shift;
      bool ordered = true;
      for (std::size_t k = 1; k < trail.size(); ++k) ordered &= trail[k].timestamp_s > trail[k - 1].timestamp_s;
      if (!ordered) continue;  // float rounding collapsed two stamps
      CHECK(rel_close(integrate_power_samples(trail), base, 1e-9));
    }
  }

  TEST_CASE("property: additivity at interior samples") {
    Gen g(202);
    for (int i = 0; i < 300; ++i) {
      auto trail = random_power_trail(g, g.integer(3, 40));
      const auto cut = static_cast<std::size_t>(g.integer(1, static_cast<int>(trail.size()) - 2));
      std::span<const EnergySample> all(trail);
      const double whole = integrate_power_samples(all);
      const double split = integrate_power_samples(all.first(cut + 1)) +
                           integrate_power_samples(all.subspan(cut));
      CHECK(rel_close(whole, split, 1e-9));
    }
  }

  TEST_CASE("property: unwrapped counter trails equal (last - first) / 1e6") {
    Gen g(303);
    for (int i = 0; i < 300; ++i) {
      std::vector<EnergySample> trail;
      double v = std::floor(g.uniform(0, 1e9));
      for (int k = 0, n = g.integer(1, 30); k < n; ++k) {
        trail.push_back({double(k), ReadingKind::cumulative_uj, v, "d0"});
        v += std::floor(g.uniform(0, 1e7));
      }
      CHECK(integrate_counter_samples(trail, 0) == (trail.back().value - trail.front().value) / 1e6);
    }
  }

  TEST_CASE("property: counter wrap matches modular arithmetic") {
    Gen g(404);
    for (int i = 0; i < 1000; ++i) {
      const auto max = static_cast<std::uint64_t>(g.integer(1, 1'000'000));
      const auto prev = static_cast<std::uint64_t>(g.integer(0, static_cast<int>(max)));
      const auto curr = static_cast<std::uint64_t>(g.integer(0, static_cast<int>(max)));
      const auto d = unwrap_counter_delta(prev, curr, max);
      CHECK(d <= max);
      CHECK((prev + d) % max == curr % max);
    }
  }

  TEST_CASE("session samples concurrently and takes t=0 and stop samples") {
    FakeBackend backend;
    auto session = start_measurement(backend, kDev, 0.01);
    CHECK(session.active());
    CHECK(backend.reads.load() == 1);  // first sample at t=0, before returning
    std::this_thread::sleep_for(std::chrono::milliseconds(120));
    const auto e = session.stop(Phase::training);
    CHECK_FALSE(session.active());
    REQUIRE(e.trails.size() == 1);
    const auto& s = e.trails[0].samples;
    CHECK(s.front().timestamp_s == 0.0);
    CHECK(s.size() >= 4);
    CHECK(s.back().timestamp_s == doctest::Approx(e.duration_s));
    CHECK(e.energy_j == doctest::Approx(10.0 * e.duration_s).epsilon(1e-9));
    CHECK(e.backend_id == "fake");
    CHECK(e.trails[0].device_id == "d0");
    CHECK(e.window.stop >= e.window.start);
  }

  TEST_CASE("double stop is a usage error") {
    FakeBackend backend;
    auto session = start_measurement(backend, kDev, 0.5);
    session.stop(Phase::inference);
    CHECK_THROWS_AS(session.stop(Phase::inference), UsageError);
  }

  TEST_CASE("one active session per device") {
    FakeBackend backend;
    auto first = start_measurement(backend, kDev, 0.5);
    CHECK_THROWS_AS(start_measurement(backend, kDev, 0.5), UsageError);
    first.stop(Phase::training);
    auto second = start_measurement(backend, kDev, 0.5);
    second.stop(Phase::training);
    {
      auto dropped = start_measurement(backend, kDev, 0.5);  // destructor releases the device
    }
    CHECK_NOTHROW(start_measurement(backend, kDev, 0.5).stop(Phase::training));
  }

  TEST_CASE("sample interval must be positive") {
    FakeBackend backend;
    CHECK_THROWS_AS(start_measurement(backend, kDev, 0.0), ValidationError);
    CHECK_THROWS_AS(start_measurement(backend, kDev, -1.0), ValidationError);
    std::vector<DeviceCoefficients> none;
    CHECK_THROWS_AS(start_measurement(backend, none, 1.0), ValidationError);
  }

  TEST_CASE("sampler errors surface at stop") {
    FakeBackend backend(true);
    auto session = start_measurement(backend, kDev, 0.005);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    CHECK_THROWS_AS(session.stop(Phase::training), BackendError);
    // The device was released: a new start reaches the (still broken) sensor.
    CHECK_THROWS_AS(start_measurement(backend, kDev, 0.005), BackendError);
  }
}
