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

#include <CLI11.hpp>
#include <iostream>

#include "carbench/cli.hpp"
#include "carbench/error.hpp"

int main(int argc, char** argv) {
  namespace cli = carbench::cli;
  CLI::App app{"Carbon-aware benchmark harness: measure, account, rank and plot."};
  app.require_subcommand(1);

  cli::RunOptions run;
  std::string run_alpha;
  auto* run_cmd = app.add_subcommand("run", "Evaluate every model in a suite config and write reports");
  run_cmd->add_option("--config", run.config, "Suite config (JSON)")->required();
  run_cmd->add_option("--out", run.out, "Output directory (default: config, $AI_CARE_OUT, ./out)");
  run_cmd->add_option("--alpha", run_alpha, "SCAS weight or comma-separated sweep");
  run_cmd->add_option("--intensity", run.intensity_g_per_kwh,
                      "Fixed grid intensity in gCO2/kWh (overrides the provider)");
  run_cmd->add_option("--sample-interval", run.sample_interval_s, "Meter sample interval in seconds");

  cli::ScoreOptions score;
  std::string score_alpha, score_metric;
  auto* score_cmd = app.add_subcommand("score", "Re-score a records file without re-running workloads");
  score_cmd->add_option("--records", score.records, "records.json from a previous run")->required();
  score_cmd->add_option("--alpha", score_alpha, "SCAS weight or comma-separated sweep");
  score_cmd->add_option("--metric", score_metric, "accuracy, precision, recall or f1")
      ->check(CLI::IsMember({"accuracy", "precision", "recall", "f1"}));
  score_cmd->add_option("--out", score.out, "Output directory");

  cli::FrontierOptions frontier;
  std::string frontier_metric;
  auto* frontier_cmd = app.add_subcommand("frontier", "Print the Pareto frontier of a records file");
  frontier_cmd->add_option("--records", frontier.records, "records.json from a previous run")->required();
  frontier_cmd->add_option("--metric", frontier_metric, "accuracy, precision, recall or f1")
      ->required()
      ->check(CLI::IsMember({"accuracy", "precision", "recall", "f1"}));
  frontier_cmd->add_option("--out", frontier.out, "Output directory for the SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      if (!run_alpha.empty()) run.alphas = cli::parse_alpha_list(run_alpha);
      return cli::cmd_run(run, std::cout, std::cerr);
    }
    if (score_cmd->parsed()) {
      if (!score_alpha.empty()) score.alphas = cli::parse_alpha_list(score_alpha);
      if (!score_metric.empty()) score.metric = carbench::parse_metric(score_metric);
      return cli::cmd_score(score, std::cout, std::cerr);
    }
    frontier.metric = carbench::parse_metric(frontier_metric);
    return cli::cmd_frontier(frontier, std::cout, std::cerr);
  } catch (const carbench::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
}
