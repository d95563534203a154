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

#include "carbench/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "carbench/canonical_json.hpp"
#include "carbench/error.hpp"

namespace carbench {

using nlohmann::json;

const MetricTradeoff* ReportBundle::tradeoff(Metric metric) const {
  for (const auto& t : tradeoffs) {
    if (t.metric == metric) return &t;
  }
  return nullptr;
}

const ScoreTable* ReportBundle::score_table(Metric metric, double alpha) const {
  for (const auto& s : scores) {
    if (s.metric == metric && s.alpha == alpha) return &s;
  }
  return nullptr;
}

ReportBundle build_bundle(SuiteMetadata metadata, std::vector<EvaluationRecord> records,
                          std::span<const Metric> metrics) {
  if (metadata.alphas.empty()) throw ConfigError("at least one SCAS alpha is required");
  for (double a : metadata.alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("SCAS alpha must lie in [0, 1]");
  }
  std::sort(records.begin(), records.end(),
            [](const EvaluationRecord& a, const EvaluationRecord& b) { return a.model_id < b.model_id; });

  ReportBundle bundle;
  bundle.metadata = std::move(metadata);
  bundle.records = std::move(records);
  bundle.metrics.assign(metrics.begin(), metrics.end());

  std::set<std::string> failed_ids;
  for (const auto& r : bundle.records) {
    if (!r.ok()) {
      failed_ids.insert(r.model_id);
      bundle.exclusions.push_back({r.model_id, std::nullopt, r.failure_reason.value_or("failed")});
    }
  }
  if (!failed_ids.empty()) {
    bundle.warnings.push_back(std::to_string(failed_ids.size()) + " model(s) failed and are excluded");
  }

  for (Metric metric : bundle.metrics) {
    std::vector<Exclusion> skipped;
    MetricTradeoff t;
    t.metric = metric;
    t.points = tradeoff_set(bundle.records, metric, &skipped);
    sort_by_carbon(t.points);
    t.frontier = pareto_frontier(t.points);
    for (auto& s : skipped) {
      // Failed records are already listed once without a metric.
      if (!failed_ids.contains(s.model_id)) bundle.exclusions.push_back(std::move(s));
    }
    if (t.points.empty()) {
      bundle.warnings.push_back("no eligible records for metric " + std::string(to_string(metric)));
    }
    for (double alpha : bundle.metadata.alphas) {
      bundle.scores.push_back({metric, alpha, rank_models(bundle.records, metric, alpha)});
    }
    bundle.tradeoffs.push_back(std::move(t));
  }
  return bundle;
}

namespace {

json point_to_json(const TradeoffPoint& p) {
  return {{"model_id", p.model_id}, {"family", p.family},    {"dataset", p.dataset},
          {"metric", to_string(p.metric)}, {"c_total_g", p.c_total_g}, {"p", p.p}};
}

json score_to_json(const ScoreEntry& e) {
  json flags = json::array();
  if (e.performance_constant) flags.push_back("performance_constant");
  if (e.carbon_constant) flags.push_back("carbon_constant");
  return {{"model_id", e.model_id}, {"family", e.family}, {"dataset", e.dataset},
          {"p", e.p},               {"c_total_g", e.c_total_g}, {"p_hat", e.p_hat},
          {"c_hat", e.c_hat},       {"scas", e.scas},     {"degenerate_flags", std::move(flags)}};
}

json intensity_summary(const ReportBundle& bundle) {
  json out = to_json(bundle.metadata).at("intensity");
  std::set<std::string> sources;
  std::set<double> values;
  for (const auto& r : bundle.records) {
    sources.insert(std::string(to_string(r.intensity.source)));
    values.insert(r.intensity.value_g_per_kwh);
  }
  if (sources.contains("fallback")) {
    out["source"] = "fallback";
  } else if (sources.size() == 1) {
    out["source"] = *sources.begin();
  } else {
    out["source"] = sources.empty() ? json(nullptr) : json("mixed");
  }
  out["value_g_per_kwh"] = values.size() == 1 ? json(*values.begin()) : json(nullptr);
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string emit_json(const ReportBundle& bundle) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["kind"] = "report";
  doc["metadata"] = to_json(bundle.metadata);
  doc["metadata"]["intensity"] = intensity_summary(bundle);

  json records = json::array();
  for (const auto& r : bundle.records) {
    // Failed records are reported through exclusions.
    if (r.ok()) records.push_back(to_json(r, false));
  }
  doc["records"] = std::move(records);

  json scores = json::array();
  for (const auto& table : bundle.scores) {
    json entries = json::array();
    for (const auto& e : table.entries) entries.push_back(score_to_json(e));
    scores.push_back({{"metric", to_string(table.metric)},
                      {"alpha", table.alpha},
                      {"entries", std::move(entries)}});
  }
  doc["scores"] = std::move(scores);

  json tradeoffs = json::object();
  json frontiers = json::object();
  for (const auto& t : bundle.tradeoffs) {
    json pts = json::array(), front = json::array();
    for (const auto& p : t.points) pts.push_back(point_to_json(p));
    for (const auto& p : t.frontier) front.push_back(point_to_json(p));
    tradeoffs[std::string(to_string(t.metric))] = std::move(pts);
    frontiers[std::string(to_string(t.metric))] = std::move(front);
  }
  doc["tradeoffs"] = std::move(tradeoffs);
  doc["frontiers"] = std::move(frontiers);

  json exclusions = json::array();
  for (const auto& e : bundle.exclusions) {
    exclusions.push_back({{"model_id", e.model_id},
                          {"metric", e.metric ? json(to_string(*e.metric)) : json(nullptr)},
                          {"reason", e.reason}});
  }
  doc["exclusions"] = std::move(exclusions);
  doc["warnings"] = bundle.warnings;
  return canonical_dump(doc);
}

std::string emit_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "model_id,family,dataset,metric,P,E_train_kWh,E_inf_kWh,C_total_g,p_hat,c_hat,scas,on_frontier\n";
  const double alpha = bundle.metadata.alphas.front();
  for (const auto& r : bundle.records) {
    if (!r.ok()) continue;
    for (Metric metric : bundle.metrics) {
      const auto p = r.metrics.get(metric);
      if (!p) continue;
      const ScoreEntry* score = nullptr;
      if (const auto* table = bundle.score_table(metric, alpha)) {
        for (const auto& e : table->entries) {
          if (e.model_id == r.model_id) score = &e;
        }
      }
      bool on_frontier = false;
      if (const auto* t = bundle.tradeoff(metric)) {
        on_frontier = std::any_of(t->frontier.begin(), t->frontier.end(),
                                  [&](const TradeoffPoint& f) { return f.model_id == r.model_id; });
      }
      os << csv_field(r.model_id) << ',' << csv_field(r.family) << ',' << csv_field(r.dataset) << ','
         << to_string(metric) << ',' << format_double(*p) << ',' << format_double(r.e_training_kwh)
         << ',' << format_double(r.e_inference_kwh) << ',' << format_double(r.emissions.c_total_g)
         << ',' << (score ? format_double(score->p_hat) : "") << ','
         << (score ? format_double(score->c_hat) : "") << ','
         << (score ? format_double(score->scas) : "") << ',' << (on_frontier ? "true" : "false")
         << '\n';
    }
  }
  return os.str();
}

std::string emit_tradeoff_svg(const ReportBundle& bundle, Metric metric, const PlotStyle& style) {
  const auto* t = bundle.tradeoff(metric);
  if (t == nullptr) return render_tradeoff_svg({}, {}, to_string(metric), style);
  return render_tradeoff_svg(t->points, t->frontier, to_string(metric), style);
}

std::string emit_score_grid(const ReportBundle& bundle, const PlotStyle& style) {
  std::vector<ScoreEntry> entries;
  const double alpha = bundle.metadata.alphas.front();
  for (const auto& table : bundle.scores) {
    if (table.alpha != alpha) continue;
    entries.insert(entries.end(), table.entries.begin(), table.entries.end());
  }
  return render_score_grid(entries, bundle.metrics, style);
}

void write_report_artifacts(const ReportBundle& bundle, const std::filesystem::path& out_dir,
                            const PlotStyle& style) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "report.json", emit_json(bundle));
  write_file(out_dir / "report.csv", emit_csv(bundle));
  for (Metric metric : bundle.metrics) {
    write_file(out_dir / ("tradeoff_" + std::string(to_string(metric)) + ".svg"),
               emit_tradeoff_svg(bundle, metric, style));
  }
  write_file(out_dir / "score_grid.svg", emit_score_grid(bundle, style));
}

}  // namespace carbench
