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

#include "carbench/energy_model.hpp"

#include <cmath>
#include <set>

#include "carbench/error.hpp"

namespace carbench {
namespace {

void require_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

std::string_view to_string(DeviceKind kind) {
  return kind == DeviceKind::gpu ? "gpu" : "cpu";
}

DeviceKind parse_device_kind(std::string_view text) {
  if (text == "cpu") return DeviceKind::cpu;
  if (text == "gpu") return DeviceKind::gpu;
  throw ValidationError("unknown device_kind '" + std::string(text) + "'");
}

void DeviceCoefficients::validate() const {
  if (device_id.empty()) throw ValidationError("device_id must not be empty");
  require_nonnegative(alpha_d, "alpha_d");
  require_nonnegative(beta_d, "beta_d");
  require_nonnegative(p_static, "p_static");
}

void WorkloadCounts::validate() const {
  require_nonnegative(flops, "flops");
  require_nonnegative(mem_accesses, "mem_accesses");
  require_nonnegative(duration_s, "duration_s");
}

double estimate_energy(const WorkloadCounts& counts, const DeviceCoefficients& coeffs) {
  counts.validate();
  coeffs.validate();
  const double computation = coeffs.alpha_d * counts.flops + coeffs.beta_d * counts.mem_accesses;
  const double idle = coeffs.p_static * counts.duration_s;
  const double energy = combine_phase_energy(computation, idle);
  if (!std::isfinite(energy)) throw ValidationError("energy estimate overflowed");
  return energy;
}

double joules_to_kwh(double joules) {
  require_nonnegative(joules, "energy (J)");
  return joules / kJoulesPerKwh;
}

double combine_phase_energy(double computation_j, double static_j) {
  require_nonnegative(computation_j, "computation energy");
  require_nonnegative(static_j, "static energy");
  return computation_j + static_j;
}

void validate_device_table(const std::vector<DeviceCoefficients>& devices) {
  std::set<std::string> seen;
  for (const auto& d : devices) {
    d.validate();
    if (!seen.insert(d.device_id).second) {
      throw ValidationError("duplicate device_id '" + d.device_id + "'");
    }
  }
}

std::vector<DeviceCoefficients> illustrative_device_table() {
  // Rough magnitudes: ~10 GFLOP/J CPU arithmetic, ~0.6 nJ per DRAM word,
  // idle package draw in the tens of watts. Not measurements.
  return {
      {"cpu0", DeviceKind::cpu, 1.0e-10, 6.4e-10, 15.0},
  };
}

}  // namespace carbench
