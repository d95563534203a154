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

#include "carbench/carbon.hpp"

#include <algorithm>
#include <cmath>

#include "carbench/error.hpp"

namespace carbench {

std::string_view to_string(IntensitySource source) {
  switch (source) {
    case IntensitySource::fixed: return "fixed";
    case IntensitySource::file: return "file";
    case IntensitySource::remote: return "remote";
    case IntensitySource::fallback: return "fallback";
  }
  return "fixed";
}

IntensitySource parse_intensity_source(std::string_view text) {
  if (text == "fixed") return IntensitySource::fixed;
  if (text == "file") return IntensitySource::file;
  if (text == "remote") return IntensitySource::remote;
  if (text == "fallback") return IntensitySource::fallback;
  throw ValidationError("unknown intensity source '" + std::string(text) + "'");
}

void CarbonIntensitySample::validate() const {
  if (!std::isfinite(value_g_per_kwh) || !(value_g_per_kwh > 0.0)) {
    throw ValidationError("carbon intensity must be finite and > 0");
  }
  if (!std::isfinite(timestamp_s)) throw ValidationError("intensity timestamp must be finite");
}

EmissionBreakdown EmissionBreakdown::from_phases(double training_g, double inference_g) {
  if (!(training_g >= 0.0) || !(inference_g >= 0.0)) {
    throw ValidationError("phase emissions must be >= 0");
  }
  return {training_g, inference_g, training_g + inference_g};
}

double emissions(double energy_kwh, double intensity_g_per_kwh) {
  if (!std::isfinite(energy_kwh) || energy_kwh < 0.0) {
    throw ValidationError("energy (kWh) must be finite and >= 0");
  }
  if (!std::isfinite(intensity_g_per_kwh) || !(intensity_g_per_kwh > 0.0)) {
    throw ValidationError("carbon intensity must be finite and > 0");
  }
  return intensity_g_per_kwh * energy_kwh;
}

double emissions(double energy_kwh, const CarbonIntensitySample& intensity) {
  return emissions(energy_kwh, intensity.value_g_per_kwh);
}

namespace {

// Left-hold lookup; instants before the series start take the first value.
double intensity_at(std::span<const CarbonIntensitySample> series, double t) {
  auto it = std::upper_bound(series.begin(), series.end(), t,
                             [](double v, const CarbonIntensitySample& s) { return v < s.timestamp_s; });
  if (it == series.begin()) return series.front().value_g_per_kwh;
  return std::prev(it)->value_g_per_kwh;
}

// Joules drawn over [a, b] inside step [i-1, i] of a trail.
double step_energy(const DeviceTrail& trail, std::size_t i, double a, double b) {
  const auto& s0 = trail.samples[i - 1];
  const auto& s1 = trail.samples[i];
  const double span = s1.timestamp_s - s0.timestamp_s;
  if (trail.rule == IntegrationRule::trapezoid) {
    auto power = [&](double t) {
      return s0.value + (s1.value - s0.value) * (t - s0.timestamp_s) / span;
    };
    return 0.5 * (power(a) + power(b)) * (b - a);
  }
  double delta_uj = s1.value - s0.value;
  if (delta_uj < 0.0) {
    delta_uj = static_cast<double>(unwrap_counter_delta(static_cast<std::uint64_t>(s0.value),
                                                        static_cast<std::uint64_t>(s1.value),
                                                        trail.max_range_uj));
  }
  return delta_uj / 1e6 * (b - a) / span;
}

}  // namespace

double emissions_time_weighted(const PhaseEnergy& phase,
                               std::span<const CarbonIntensitySample> series) {
  if (series.empty()) throw ConfigError("time-weighted emissions need a nonempty intensity series");
  for (std::size_t i = 0; i < series.size(); ++i) {
    series[i].validate();
    if (i > 0 && !(series[i].timestamp_s > series[i - 1].timestamp_s)) {
      throw ValidationError("intensity series timestamps must be strictly increasing");
    }
  }
  if (series.size() == 1) return emissions(joules_to_kwh(phase.energy_j), series.front());

  double grams = 0.0;
  for (const auto& trail : phase.trails) {
    const auto& samples = trail.samples;
    if (samples.size() < 2) {
      const double t = samples.empty() ? 0.0 : samples.front().timestamp_s;
      grams += emissions(joules_to_kwh(trail.energy_j), intensity_at(series, t));
      continue;
    }
    // An analytical trail that starts above zero carries energy with no
    // interval to attach it to.
    if (trail.rule == IntegrationRule::analytical && samples.front().value > 0.0) {
      grams += emissions(joules_to_kwh(samples.front().value / 1e6),
                         intensity_at(series, samples.front().timestamp_s));
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
      double a = samples[i - 1].timestamp_s;
      const double end = samples[i].timestamp_s;
      auto cut = std::upper_bound(series.begin(), series.end(), a,
                                  [](double v, const CarbonIntensitySample& s) { return v < s.timestamp_s; });
      while (a < end) {
        const double b = (cut != series.end() && cut->timestamp_s < end) ? cut->timestamp_s : end;
        const double joules = step_energy(trail, i, a, b);
        grams += intensity_at(series, a) * (joules / kJoulesPerKwh);
        a = b;
        if (cut != series.end()) ++cut;
      }
    }
  }
  return grams;
}

std::vector<TimedIntensity> IntensityProvider::observed(std::chrono::steady_clock::time_point from,
                                                        std::chrono::steady_clock::time_point) {
  return {{from, fetch()}};
}

CarbonIntensitySample fetch_intensity(IntensityProvider& provider) { return provider.fetch(); }

}  // namespace carbench
