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

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "carbench/carbon.hpp"
#include "carbench/error.hpp"

namespace carbench {

using SteadyClock = std::chrono::steady_clock;

FixedIntensityProvider::FixedIntensityProvider(double g_per_kwh) : value_(g_per_kwh) {
  CarbonIntensitySample{value_, 0.0, IntensitySource::fixed}.validate();
}

CarbonIntensitySample FixedIntensityProvider::fetch() {
  return {value_, 0.0, IntensitySource::fixed};
}

double system_epoch_seconds() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

FileIntensityProvider::FileIntensityProvider(const std::filesystem::path& path,
                                             std::optional<double> fallback_g_per_kwh,
                                             EpochClock clock)
    : fallback_(fallback_g_per_kwh), clock_(std::move(clock)) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read intensity file " + path.string());
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double ts = 0.0, value = 0.0;
    std::string extra;
    if (!(fields >> ts >> value) || (fields >> extra)) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected '<timestamp_s> <g_per_kwh>'");
    }
    CarbonIntensitySample s{value, ts, IntensitySource::file};
    s.validate();
    if (!entries_.empty() && !(ts > entries_.back().timestamp_s)) {
      throw ValidationError(path.string() + ": timestamps must be strictly increasing");
    }
    entries_.push_back(s);
  }
  if (entries_.empty()) throw ValidationError(path.string() + ": no intensity entries");
  if (fallback_) CarbonIntensitySample{*fallback_, 0.0, IntensitySource::fallback}.validate();
}

CarbonIntensitySample FileIntensityProvider::at(double epoch_s) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), epoch_s,
                             [](double v, const CarbonIntensitySample& s) { return v < s.timestamp_s; });
  if (it != entries_.begin()) return *std::prev(it);
  if (fallback_) return {*fallback_, 0.0, IntensitySource::fallback};
  throw ConfigError("intensity file has no entry at or before the current time and no fallback");
}

CarbonIntensitySample FileIntensityProvider::fetch() { return at(clock_()); }

std::vector<TimedIntensity> FileIntensityProvider::observed(SteadyClock::time_point from,
                                                            SteadyClock::time_point to) {
  // Map the steady window onto the epoch axis of the file.
  const double now_epoch = clock_();
  const auto now_steady = SteadyClock::now();
  const double from_epoch =
      now_epoch - std::chrono::duration<double>(now_steady - from).count();
  const double to_epoch = now_epoch - std::chrono::duration<double>(now_steady - to).count();

  std::vector<TimedIntensity> out{{from, at(from_epoch)}};
  for (const auto& e : entries_) {
    if (e.timestamp_s > from_epoch && e.timestamp_s <= to_epoch) {
      const auto offset = std::chrono::duration_cast<SteadyClock::duration>(
          std::chrono::duration<double>(e.timestamp_s - from_epoch));
      out.push_back({from + offset, e});
    }
  }
  return out;
}

RemoteIntensityProvider::Endpoint RemoteIntensityProvider::parse_url(const std::string& url) {
  static const std::regex pattern(R"(^http://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) {
    throw ConfigError("remote intensity url must look like http://host[:port]/path, got '" + url + "'");
  }
  Endpoint ep;
  ep.host = m[1].str();
  if (m[2].matched) ep.port = std::stoi(m[2].str());
  if (m[3].matched) ep.path = m[3].str();
  return ep;
}

RemoteIntensityProvider::RemoteIntensityProvider(RemoteIntensityOptions options)
    : options_(std::move(options)), endpoint_(parse_url(options_.url)) {
  if (!(options_.poll_interval_s > 0.0)) throw ConfigError("poll_interval_s must be > 0");
  if (!(options_.timeout_s > 0.0)) throw ConfigError("timeout_s must be > 0");
  if (options_.fallback_g_per_kwh) {
    CarbonIntensitySample{*options_.fallback_g_per_kwh, 0.0, IntensitySource::fallback}.validate();
  }
  poller_ = std::jthread([this](std::stop_token token) { run(std::move(token)); });
  await_poll_count(1, std::chrono::milliseconds(
                          static_cast<std::int64_t>(options_.timeout_s * 3000.0) + 1000));
}

RemoteIntensityProvider::~RemoteIntensityProvider() {
  poller_.request_stop();
  if (poller_.joinable()) poller_.join();
}

void RemoteIntensityProvider::poll_once() {
  std::optional<CarbonIntensitySample> fresh;
  try {
    httplib::Client client(endpoint_.host, endpoint_.port);
    const auto secs = static_cast<time_t>(options_.timeout_s);
    const auto usecs = static_cast<time_t>((options_.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    if (auto res = client.Get(endpoint_.path); res && res->status == 200) {
      const auto doc = nlohmann::json::parse(res->body);
      CarbonIntensitySample s{doc.at("carbon_intensity").get<double>(),
                              doc.at("timestamp").get<double>(), IntensitySource::remote};
      s.validate();
      fresh = s;
    }
  } catch (const std::exception&) {
    fresh.reset();
  }

  std::lock_guard lock(mutex_);
  last_poll_ok_ = fresh.has_value();
  if (fresh) cache_ = fresh;
  ++polls_;
  if (cache_ || options_.fallback_g_per_kwh) {
    history_.push_back({SteadyClock::now(), current_locked()});
  }
  changed_.notify_all();
}

void RemoteIntensityProvider::run(std::stop_token token) {
  const auto step = std::chrono::duration_cast<SteadyClock::duration>(
      std::chrono::duration<double>(options_.poll_interval_s));
  auto next = SteadyClock::now();
  while (!token.stop_requested()) {
    poll_once();
    next += step;
    std::unique_lock lock(mutex_);
    changed_.wait_until(lock, token, next, [] { return false; });
  }
}

CarbonIntensitySample RemoteIntensityProvider::current_locked() const {
  if (cache_) {
    CarbonIntensitySample s = *cache_;
    if (!last_poll_ok_) s.source = IntensitySource::fallback;
    return s;
  }
  if (options_.fallback_g_per_kwh) {
    return {*options_.fallback_g_per_kwh, 0.0, IntensitySource::fallback};
  }
  throw ConfigError("remote intensity endpoint " + options_.url +
                    " unreachable and no fallback intensity configured");
}

CarbonIntensitySample RemoteIntensityProvider::fetch() {
  std::lock_guard lock(mutex_);
  return current_locked();
}

std::vector<TimedIntensity> RemoteIntensityProvider::observed(SteadyClock::time_point from,
                                                              SteadyClock::time_point to) {
  std::lock_guard lock(mutex_);
  std::vector<TimedIntensity> out;
  for (const auto& h : history_) {
    if (h.at <= from) {
      out.assign(1, {from, h.sample});
    } else if (h.at <= to) {
      out.push_back(h);
    }
  }
  if (out.empty()) out.push_back({from, current_locked()});
  return out;
}

std::uint64_t RemoteIntensityProvider::poll_count() const {
  std::lock_guard lock(mutex_);
  return polls_;
}

bool RemoteIntensityProvider::await_poll_count(std::uint64_t count,
                                               std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  return changed_.wait_for(lock, timeout, [&] { return polls_ >= count; });
}

}  // namespace carbench
