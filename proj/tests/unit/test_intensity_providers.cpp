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
#include <httplib.h>

#include <atomic>
#include <json.hpp>
#include <thread>

#include "carbench/carbon.hpp"
#include "carbench/error.hpp"
#include "support.hpp"

using namespace carbench;
using namespace std::chrono_literals;
using carbench::testing::TempDir;
using carbench::testing::write_text;

namespace {

// In-process intensity endpoint on an ephemeral port.
class StubServer {
 public:
  explicit StubServer(double value) : value_(value) {
    server_.Get("/intensity", [this](const httplib::Request&, httplib::Response& res) {
      if (broken_) {
        res.status = 503;
        return;
      }
      const nlohmann::json body = {{"carbon_intensity", value_.load()}, {"timestamp", 1.7e9}};
      res.set_content(body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() { stop(); }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/intensity"; }
  void set(double v) { value_ = v; }
  void break_endpoint() { broken_ = true; }

 private:
  httplib::Server server_;
  std::atomic<double> value_;
  std::atomic<bool> broken_{false};
  int port_ = 0;
  std::thread thread_;
};

std::string dead_url() {
  // Bind and release a port so nothing listens there.
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  return "http://127.0.0.1:" + std::to_string(port) + "/intensity";
}

}  // namespace

TEST_SUITE("intensity_providers") {
  TEST_CASE("fixed provider") {
    FixedIntensityProvider p(400);
    const auto s = fetch_intensity(p);
    CHECK(s.value_g_per_kwh == 400.0);
    CHECK(s.source == IntensitySource::fixed);
    CHECK(p.id() == "fixed");
    CHECK_THROWS_AS(FixedIntensityProvider(0), ValidationError);
  }

  TEST_CASE("file provider returns the entry at or before now") {
    TempDir dir;
    write_text(dir / "c.txt", "# epoch g\n100 300\n200 500\n300 250\n");
    double now = 250;
    FileIntensityProvider p(dir / "c.txt", std::nullopt, [&] { return now; });
    CHECK(p.fetch().value_g_per_kwh == 500.0);
    CHECK(p.fetch().source == IntensitySource::file);
    CHECK(p.fetch().timestamp_s == 200.0);
    now = 300;
    CHECK(p.fetch().value_g_per_kwh == 250.0);
    now = 1e9;
    CHECK(p.fetch().value_g_per_kwh == 250.0);
    now = 50;
    CHECK_THROWS_AS(p.fetch(), ConfigError);

    FileIntensityProvider with_fallback(dir / "c.txt", 400.0, [] { return 0.0; });
    const auto s = with_fallback.fetch();
    CHECK(s.value_g_per_kwh == 400.0);
    CHECK(s.source == IntensitySource::fallback);
  }

  TEST_CASE("file provider maps a window onto its entries") {
    TempDir dir;
    write_text(dir / "c.txt", "100 300\n101 500\n500 250\n");
    const auto steady_now = std::chrono::steady_clock::now();
    FileIntensityProvider p(dir / "c.txt", std::nullopt, [] { return 102.0; });
    const auto obs = p.observed(steady_now - 1500ms, steady_now);
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].sample.value_g_per_kwh == 300.0);
    CHECK(obs[1].sample.value_g_per_kwh == 500.0);
    CHECK(obs[1].at > obs[0].at);
  }

  TEST_CASE("file provider rejects malformed files") {
    TempDir dir;
    write_text(dir / "a", "1 300\n1 400\n");
    CHECK_THROWS_AS(FileIntensityProvider(dir / "a", std::nullopt), ValidationError);
    write_text(dir / "b", "1 -3\n");
    CHECK_THROWS_AS(FileIntensityProvider(dir / "b", std::nullopt), ValidationError);
    write_text(dir / "c", "");
    CHECK_THROWS_AS(FileIntensityProvider(dir / "c", std::nullopt), ValidationError);
    CHECK_THROWS_AS(FileIntensityProvider(dir / "none", std::nullopt), IoError);
  }

  TEST_CASE("remote provider polls and caches") {
    StubServer stub(420);
    RemoteIntensityProvider p({stub.url(), 0.02, 1.0, 400.0});
    CHECK(p.poll_count() >= 1);
    auto s = p.fetch();
    CHECK(s.value_g_per_kwh == 420.0);
    CHECK(s.source == IntensitySource::remote);
    CHECK(s.timestamp_s == 1.7e9);

    stub.set(510);
    const auto n = p.poll_count();
    REQUIRE(p.await_poll_count(n + 2, 5s));
    CHECK(p.fetch().value_g_per_kwh == 510.0);
    CHECK(p.fetch().source == IntensitySource::remote);
  }

  TEST_CASE("remote down with a cached value returns it tagged fallback") {
    StubServer stub(420);
    RemoteIntensityProvider p({stub.url(), 0.02, 0.5, 400.0});
    REQUIRE(p.fetch().value_g_per_kwh == 420.0);
    stub.stop();
    const auto n = p.poll_count();
    REQUIRE(p.await_poll_count(n + 2, 5s));
    const auto s = p.fetch();
    CHECK(s.value_g_per_kwh == 420.0);
    CHECK(s.source == IntensitySource::fallback);
  }

  TEST_CASE("remote errors other than connection refusal also fall back") {
    StubServer stub(420);
    RemoteIntensityProvider p({stub.url(), 0.02, 0.5, 400.0});
    stub.break_endpoint();
    const auto n = p.poll_count();
    REQUIRE(p.await_poll_count(n + 2, 5s));
    CHECK(p.fetch().source == IntensitySource::fallback);
    CHECK(p.fetch().value_g_per_kwh == 420.0);
  }

  TEST_CASE("remote never reachable uses the fixed fallback") {
    RemoteIntensityProvider p({dead_url(), 0.05, 0.2, 400.0});
    const auto s = p.fetch();
    CHECK(s.value_g_per_kwh == 400.0);
    CHECK(s.source == IntensitySource::fallback);
  }

  TEST_CASE("remote never reachable without a fallback is a hard error") {
    RemoteIntensityProvider p({dead_url(), 0.05, 0.2, std::nullopt});
    CHECK_THROWS_AS(p.fetch(), ConfigError);
  }

  TEST_CASE("remote url and option validation") {
    CHECK_THROWS_AS(RemoteIntensityProvider({"https://x/y", 1, 1, 400.0}), ConfigError);
    CHECK_THROWS_AS(RemoteIntensityProvider({"ftp://x", 1, 1, 400.0}), ConfigError);
    CHECK_THROWS_AS(RemoteIntensityProvider({"http://127.0.0.1:1/x", 0, 1, 400.0}), ConfigError);
  }

  TEST_CASE("polling does not block fetch") {
    StubServer stub(420);
    RemoteIntensityProvider p({stub.url(), 0.001, 1.0, 400.0});
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) (void)p.fetch();
    CHECK(std::chrono::steady_clock::now() - start < 2s);
  }

  TEST_CASE("observed history covers the window") {
    StubServer stub(420);
    RemoteIntensityProvider p({stub.url(), 0.02, 1.0, 400.0});
    const auto from = std::chrono::steady_clock::now();
    stub.set(600);
    REQUIRE(p.await_poll_count(p.poll_count() + 3, 5s));
    const auto to = std::chrono::steady_clock::now();
    const auto obs = p.observed(from, to);
    REQUIRE(!obs.empty());
    CHECK(obs.front().at == from);
    CHECK(obs.back().sample.value_g_per_kwh == 600.0);
    for (std::size_t i = 1; i < obs.size(); ++i) CHECK(obs[i].at > obs[i - 1].at);
  }
}
