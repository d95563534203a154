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

#include <thread>

#include "carbench/error.hpp"
#include "carbench/meter_backends.hpp"
#include "support.hpp"

using namespace carbench;
using carbench::testing::TempDir;
using carbench::testing::write_text;

namespace {

const DeviceCoefficients kDev{"package-0", DeviceKind::cpu, 1e-9, 5e-9, 10};

void write_counter(const std::filesystem::path& dir, std::uint64_t value) {
  // Replace atomically so the sampler never sees a half-written file.
  write_text(dir / "energy_uj.tmp", std::to_string(value) + "\n");
  std::filesystem::rename(dir / "energy_uj.tmp", dir / "energy_uj");
}

void make_zone(const std::filesystem::path& dir, std::uint64_t value, std::uint64_t max) {
  std::filesystem::create_directories(dir);
  write_text(dir / "max_energy_range_uj", std::to_string(max) + "\n");
  write_counter(dir, value);
}

}  // namespace

TEST_SUITE("meter_backends") {
  TEST_CASE("analytical backend reproduces the energy model") {
    AnalyticalBackend backend;
    PhaseInput input{WorkloadCounts{1e9, 1e8, 2}, std::nullopt};
    auto e = start_measurement(backend, kDev, 0.5, input).stop(Phase::training);
    CHECK(e.energy_j == 21.5);
    CHECK(e.duration_s == 2.0);
    REQUIRE(e.trails.size() == 1);
    const auto& t = e.trails[0];
    CHECK(t.rule == IntegrationRule::analytical);
    CHECK(t.samples.front().timestamp_s == 0.0);
    CHECK(t.samples.front().value == 0.0);
    CHECK(t.samples.back().timestamp_s == 2.0);
    CHECK(integrate_trail(t) == doctest::Approx(21.5).epsilon(1e-12));
    CHECK(t.samples.size() == 5);  // 0, 0.5, 1, 1.5, 2
  }

  TEST_CASE("analytical zero-duration phase") {
    AnalyticalBackend backend;
    auto e = start_measurement(backend, kDev, 1.0, {WorkloadCounts{0, 0, 0}, std::nullopt})
                 .stop(Phase::inference);
    CHECK(e.energy_j == 0.0);
    CHECK(e.trails[0].samples.size() == 1);
  }

  TEST_CASE("analytical backend over a child process charges static power for wall time") {
    AnalyticalBackend backend;
    auto session = start_measurement(backend, kDev, 1.0, {});
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    auto e = session.stop(Phase::training);
    CHECK(e.duration_s >= 0.03);
    CHECK(e.energy_j == doctest::Approx(10.0 * e.duration_s).epsilon(1e-12));
  }

  TEST_CASE("analytical backend refuses traces") {
    AnalyticalBackend backend;
    CHECK_THROWS_AS(backend.check_compatible({std::nullopt, "x.trace"}), ConfigError);
  }

  TEST_CASE("counter_file: live counter delta") {
    TempDir dir;
    const auto zone = dir / "package-0";
    make_zone(zone, 1'000'000, 262'143'328'850);
    CounterFileBackend backend(dir.path());
    auto session = start_measurement(backend, kDev, 0.005, {});
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    write_counter(zone, 4'600'000);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    auto e = session.stop(Phase::training);
    CHECK(e.energy_j == 3.6);
    CHECK(e.backend_id == "counter_file");
    const auto& s = e.trails[0].samples;
    CHECK(s.front().value == 1'000'000);
    CHECK(s.back().value == 4'600'000);
    CHECK(e.trails[0].max_range_uj == 262'143'328'850);
  }

  TEST_CASE("counter_file: wrap between samples") {
    TempDir dir;
    const auto zone = dir / "z";
    make_zone(zone, 900, 1000);
    CounterFileBackend backend(dir.path(), {{"package-0", zone}});
    auto session = start_measurement(backend, kDev, 0.005, {});
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    write_counter(zone, 50);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    CHECK(session.stop(Phase::training).energy_j == 150e-6);
  }

  TEST_CASE("counter_file: immediate stop with a still counter") {
    TempDir dir;
    make_zone(dir / "package-0", 777, 1000);
    CounterFileBackend backend(dir.path());
    CHECK(start_measurement(backend, kDev, 1.0, {}).stop(Phase::inference).energy_j == 0.0);
  }

  TEST_CASE("counter_file: unreadable files fail at start naming the backend") {
    TempDir dir;
    CounterFileBackend backend(dir.path());
    try {
      start_measurement(backend, kDev, 1.0, {});
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.backend() == "counter_file");
      CHECK(std::string(e.what()).find("counter_file") != std::string::npos);
    }
    make_zone(dir / "package-0", 5, 0);
    CHECK_THROWS_AS(start_measurement(backend, kDev, 1.0, {}), BackendError);
  }

  TEST_CASE("counter_file only meters child processes") {
    CounterFileBackend backend("/nonexistent");
    CHECK_THROWS_AS(backend.check_compatible({WorkloadCounts{}, std::nullopt}), ConfigError);
    CHECK_THROWS_AS(backend.check_compatible({std::nullopt, "t"}), ConfigError);
    CHECK_NOTHROW(backend.check_compatible({}));
  }

  TEST_CASE("trace replay: constant 10 W for 2 s") {
    TempDir dir;
    write_text(dir / "p.trace", "# constant\n100.0 10 power_w\n\n101.0 10 power_w\n102.0 10 power_w\n");
    TraceReplayBackend backend;
    auto e = start_measurement(backend, kDev, 1.0, {std::nullopt, dir / "p.trace"}).stop(Phase::training);
    CHECK(e.energy_j == 20.0);
    CHECK(e.duration_s == 2.0);
    CHECK(e.trails[0].rule == IntegrationRule::trapezoid);
    CHECK(e.trails[0].samples.front().timestamp_s == 0.0);
  }

  TEST_CASE("trace replay: cumulative trace") {
    TempDir dir;
    write_text(dir / "c.trace", "0 1000000 cumulative_uj\n1 4600000 cumulative_uj\n");
    TraceReplayBackend backend(dir / "c.trace");
    auto e = start_measurement(backend, kDev, 1.0, {}).stop(Phase::training);
    CHECK(e.energy_j == 3.6);
    CHECK(e.trails[0].rule == IntegrationRule::counter_delta);
  }

  TEST_CASE("trace parsing errors") {
    TempDir dir;
    write_text(dir / "a", "0 10 power_w\n0 10 power_w\n");
    CHECK_THROWS_AS(load_trace(dir / "a"), ValidationError);
    write_text(dir / "b", "0 10 power_w\n1 10 cumulative_uj\n");
    CHECK_THROWS_AS(load_trace(dir / "b"), ValidationError);
    write_text(dir / "c", "0 10 power_w\n");
    CHECK_THROWS_AS(load_trace(dir / "c"), ValidationError);
    write_text(dir / "d", "0 ten power_w\n1 10 power_w\n");
    CHECK_THROWS_AS(load_trace(dir / "d"), ValidationError);
    write_text(dir / "e", "0 -1 power_w\n1 10 power_w\n");
    CHECK_THROWS_AS(load_trace(dir / "e"), ValidationError);
    write_text(dir / "f", "# nothing\n");
    CHECK_THROWS_AS(load_trace(dir / "f"), ValidationError);
    CHECK_THROWS_AS(load_trace(dir / "missing"), IoError);

    TraceReplayBackend backend;
    CHECK_THROWS_AS(start_measurement(backend, kDev, 1.0, {std::nullopt, dir / "missing"}), BackendError);
    CHECK_THROWS_AS(backend.check_compatible({WorkloadCounts{}, std::nullopt}), ConfigError);
    CHECK_THROWS_AS(backend.check_compatible({}), ConfigError);
  }

  TEST_CASE("counter file parsing") {
    TempDir dir;
    write_text(dir / "ok", "  12345\n");
    CHECK(read_counter_file(dir / "ok") == 12345);
    write_text(dir / "bad", "12x\n");
    CHECK_THROWS_AS(read_counter_file(dir / "bad"), ValidationError);
    CHECK_THROWS_AS(read_counter_file(dir / "nope"), IoError);
  }
}
