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

#include <csignal>
#include <thread>

#include "carbench/error.hpp"
#include "carbench/workload.hpp"
#include "support.hpp"

using namespace carbench;
using carbench::testing::read_text;
using carbench::testing::TempDir;

namespace {

WorkloadDescriptor sh(const std::string& script, double timeout_s = 30) {
  WorkloadDescriptor w;
  w.payload = ChildProcessWorkload{{"sh", "-c", script}};
  w.timeout_s = timeout_s;
  return w;
}

}  // namespace

TEST_SUITE("workload") {
  TEST_CASE("exit status is reported") {
    CHECK(run_child_process(sh("exit 0")).ok());
    const auto bad = run_child_process(sh("exit 3"));
    CHECK_FALSE(bad.ok());
    CHECK(bad.exit_code == 3);
    CHECK(bad.describe() == "exited with status 3");
  }

  TEST_CASE("signals are reported") {
    const auto killed = run_child_process(sh("kill -TERM $$"));
    CHECK_FALSE(killed.ok());
    CHECK(killed.term_signal == SIGTERM);
    CHECK(killed.describe().find("killed by signal") == 0);
  }

  TEST_CASE("timeouts kill the process group") {
    TempDir dir;
    const auto marker = dir / "late";
    const auto out = run_child_process(sh("(sleep 2; touch " + marker.string() + ") & sleep 5", 0.2));
    CHECK(out.timed_out);
    CHECK_FALSE(out.ok());
    CHECK(out.wall_s < 2.0);
    CHECK(out.describe().find("timed out") == 0);
    std::this_thread::sleep_for(std::chrono::milliseconds(2200));
    CHECK_FALSE(std::filesystem::exists(marker));
  }

  TEST_CASE("environment and working directory") {
    TempDir dir;
    auto w = sh("printf '%s|%s|%s' \"$A\" \"$B\" \"$(pwd)\" > out.txt");
    w.env = {{"A", "from-workload"}, {"B", "overridden"}};
    w.working_dir = dir.path();
    const auto out = run_child_process(w, {{"B", "from-harness"}});
    REQUIRE(out.ok());
    const auto text = read_text(dir / "out.txt");
    CHECK(text == "from-workload|from-harness|" + std::filesystem::canonical(dir.path()).string());
  }

  TEST_CASE("inherits the parent environment") {
    TempDir dir;
    ::setenv("CARBENCH_TEST_INHERIT", "yes", 1);
    auto w = sh("printf '%s' \"$CARBENCH_TEST_INHERIT\" > " + (dir / "e").string());
    REQUIRE(run_child_process(w).ok());
    CHECK(read_text(dir / "e") == "yes");
  }

  TEST_CASE("missing executable and bad cwd") {
    WorkloadDescriptor w;
    w.payload = ChildProcessWorkload{{"carbench-no-such-binary"}};
    CHECK(run_child_process(w).exit_code == 127);
    auto in_missing = sh("true");
    in_missing.working_dir = "/nonexistent/carbench";
    CHECK(run_child_process(in_missing).exit_code == 126);
  }

  TEST_CASE("descriptor validation and phase inputs") {
    WorkloadDescriptor w;
    w.payload = ChildProcessWorkload{};
    CHECK_THROWS_AS(w.validate(), ValidationError);
    w.payload = CountsOnlyWorkload{{-1, 0, 0}};
    CHECK_THROWS_AS(w.validate(), ValidationError);
    w.payload = TraceWorkload{};
    CHECK_THROWS_AS(w.validate(), ValidationError);
    w = sh("true", 0);
    CHECK_THROWS_AS(w.validate(), ValidationError);

    WorkloadDescriptor counts;
    counts.payload = CountsOnlyWorkload{{1, 2, 3}};
    CHECK(counts.kind() == WorkloadKind::counts_only);
    CHECK(counts.phase_input().counts == WorkloadCounts{1, 2, 3});
    CHECK_FALSE(counts.phase_input().trace_path);
    CHECK_THROWS_AS(run_child_process(counts), UsageError);

    WorkloadDescriptor trace;
    trace.payload = TraceWorkload{"t.trace"};
    CHECK(trace.kind() == WorkloadKind::trace);
    CHECK(trace.phase_input().trace_path == std::filesystem::path("t.trace"));
    CHECK(sh("true").kind() == WorkloadKind::child_process);
    CHECK(to_string(WorkloadKind::counts_only) == "counts_only");
  }
}
