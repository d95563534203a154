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

#include "carbench/workload.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "carbench/error.hpp"

extern char** environ;

namespace carbench {

std::string_view to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::child_process: return "child_process";
    case WorkloadKind::counts_only: return "counts_only";
    case WorkloadKind::trace: return "trace";
  }
  return "child_process";
}

WorkloadKind WorkloadDescriptor::kind() const {
  return static_cast<WorkloadKind>(payload.index());
}

void WorkloadDescriptor::validate() const {
  if (!std::isfinite(timeout_s) || !(timeout_s > 0.0)) {
    throw ValidationError("workload timeout_s must be > 0");
  }
  if (const auto* child = std::get_if<ChildProcessWorkload>(&payload)) {
    if (child->command.empty() || child->command.front().empty()) {
      throw ValidationError("child_process workload needs a command");
    }
  } else if (const auto* counts = std::get_if<CountsOnlyWorkload>(&payload)) {
    counts->counts.validate();
  } else if (std::get<TraceWorkload>(payload).path.empty()) {
    throw ValidationError("trace workload needs a path");
  }
}

PhaseInput WorkloadDescriptor::phase_input() const {
  PhaseInput input;
  if (const auto* counts = std::get_if<CountsOnlyWorkload>(&payload)) input.counts = counts->counts;
  if (const auto* trace = std::get_if<TraceWorkload>(&payload)) input.trace_path = trace->path;
  return input;
}

std::string ProcessOutcome::describe() const {
  if (timed_out) return "timed out after " + std::to_string(wall_s) + " s";
  if (term_signal != 0) return std::string("killed by signal ") + strsignal(term_signal);
  if (exit_code != 0) return "exited with status " + std::to_string(exit_code);
  return "ok";
}

namespace {

std::string resolve_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) return name;
  const char* path = std::getenv("PATH");
  std::string dirs = path ? path : "/usr/bin:/bin";
  std::size_t begin = 0;
  while (begin <= dirs.size()) {
    auto end = dirs.find(':', begin);
    if (end == std::string::npos) end = dirs.size();
    std::string dir = dirs.substr(begin, end - begin);
    if (dir.empty()) dir = ".";
    std::string candidate = dir + "/" + name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
    begin = end + 1;
  }
  return {};
}

}  // namespace

ProcessOutcome run_child_process(const WorkloadDescriptor& workload,
                                 const std::map<std::string, std::string>& extra_env) {
  workload.validate();
  const auto* child = std::get_if<ChildProcessWorkload>(&workload.payload);
  if (child == nullptr) throw UsageError("run_child_process called on a non-process workload");

  const std::string exe = resolve_executable(child->command.front());
  if (exe.empty()) {
    ProcessOutcome outcome;
    outcome.exit_code = 127;
    return outcome;
  }

  // Everything the child touches is prepared before fork.
  std::map<std::string, std::string> env_map;
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string::npos) env_map[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  for (const auto& [k, v] : workload.env) env_map[k] = v;
  for (const auto& [k, v] : extra_env) env_map[k] = v;

  std::vector<std::string> env_strings;
  for (const auto& [k, v] : env_map) env_strings.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::vector<std::string> args = child->command;
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const std::string cwd = workload.working_dir.string();

  const auto started = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ::_exit(126);
    ::execve(exe.c_str(), argv.data(), envp.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  const auto deadline =
      started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(workload.timeout_s));
  ProcessOutcome outcome;
  int status = 0;
  auto backoff = std::chrono::microseconds(200);
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) throw Error(std::string("waitpid failed: ") + std::strerror(errno));
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      outcome.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, std::chrono::microseconds(10000));
  }
  outcome.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (WIFEXITED(status)) outcome.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) outcome.term_signal = WTERMSIG(status);
  return outcome;
}

}  // namespace carbench
