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

#ifndef CARBENCH_WORKLOAD_HPP_
#define CARBENCH_WORKLOAD_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "carbench/energy_model.hpp"
#include "carbench/metering.hpp"

namespace carbench {

inline constexpr double kDefaultWorkloadTimeoutS = 3600.0;

/// Environment entry through which child workloads learn where to write
/// their metrics document.
inline constexpr std::string_view kMetricsPathEnv = "AI_CARE_METRICS_PATH";

enum class WorkloadKind { child_process, counts_only, trace };

std::string_view to_string(WorkloadKind kind);

struct ChildProcessWorkload {
  std::vector<std::string> command;  // argv; command[0] is looked up on PATH
  friend bool operator==(const ChildProcessWorkload&, const ChildProcessWorkload&) = default;
};

struct CountsOnlyWorkload {
  WorkloadCounts counts;
  friend bool operator==(const CountsOnlyWorkload&, const CountsOnlyWorkload&) = default;
};

struct TraceWorkload {
  std::filesystem::path path;
  friend bool operator==(const TraceWorkload&, const TraceWorkload&) = default;
};

struct WorkloadDescriptor {
  std::variant<ChildProcessWorkload, CountsOnlyWorkload, TraceWorkload> payload;
  std::map<std::string, std::string> env;
  std::filesystem::path working_dir;  // empty: inherit
  double timeout_s = kDefaultWorkloadTimeoutS;

  WorkloadKind kind() const;
  void validate() const;
  PhaseInput phase_input() const;

  friend bool operator==(const WorkloadDescriptor&, const WorkloadDescriptor&) = default;
};

struct ProcessOutcome {
  int exit_code = -1;    // valid when exited normally
  int term_signal = 0;   // nonzero when killed by a signal
  bool timed_out = false;
  double wall_s = 0.0;

  bool ok() const { return !timed_out && term_signal == 0 && exit_code == 0; }
  std::string describe() const;
};

/// Runs a child-process workload to completion, killing its process group on
/// timeout. `extra_env` entries override both the inherited environment and
/// the descriptor's own entries.
ProcessOutcome run_child_process(const WorkloadDescriptor& workload,
                                 const std::map<std::string, std::string>& extra_env = {});

}  // namespace carbench

#endif  // CARBENCH_WORKLOAD_HPP_
