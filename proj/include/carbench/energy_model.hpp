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

#ifndef CARBENCH_ENERGY_MODEL_HPP_
#define CARBENCH_ENERGY_MODEL_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace carbench {

inline constexpr double kJoulesPerKwh = 3.6e6;

enum class DeviceKind { cpu, gpu };

std::string_view to_string(DeviceKind kind);
DeviceKind parse_device_kind(std::string_view text);

/// Per-device coefficients of the analytical energy model.
///
/// Units are fixed: `alpha_d` joules per floating-point operation, `beta_d`
/// joules per memory access, `p_static` watts.
struct DeviceCoefficients {
  std::string device_id;
  DeviceKind device_kind = DeviceKind::cpu;
  double alpha_d = 0.0;
  double beta_d = 0.0;
  double p_static = 0.0;

  /// Throws ValidationError unless every coefficient is finite and >= 0.
  void validate() const;

  friend bool operator==(const DeviceCoefficients&, const DeviceCoefficients&) = default;
};

/// Declared work of one execution phase.
struct WorkloadCounts {
  double flops = 0.0;
  double mem_accesses = 0.0;
  double duration_s = 0.0;

  void validate() const;

  friend bool operator==(const WorkloadCounts&, const WorkloadCounts&) = default;
};

/// alpha_d * flops + beta_d * mem_accesses + p_static * duration, in joules.
double estimate_energy(const WorkloadCounts& counts, const DeviceCoefficients& coeffs);

double joules_to_kwh(double joules);

/// Phase energy as computation plus static share, both in joules.
double combine_phase_energy(double computation_j, double static_j);

/// Rejects duplicate device ids and invalid coefficients.
void validate_device_table(const std::vector<DeviceCoefficients>& devices);

/// Illustrative coefficients used when a configuration names no devices.
///
/// These are order-of-magnitude placeholders, NOT measured values. Runs
/// flagged publishable must configure their own table.
std::vector<DeviceCoefficients> illustrative_device_table();

}  // namespace carbench

#endif  // CARBENCH_ENERGY_MODEL_HPP_
