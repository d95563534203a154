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

#include "carbench/cli.hpp"

#include <charconv>
#include <cstdlib>

#include "carbench/canonical_json.hpp"
#include "carbench/config.hpp"
#include "carbench/error.hpp"
#include "carbench/report.hpp"

namespace carbench::cli {

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::optional<std::filesystem::path>& from_config) {
  if (flag) return *flag;
  if (from_config) return *from_config;
  if (const char* env = std::getenv(std::string(kOutputDirEnv).c_str()); env && *env) return env;
  return "out";
}

std::vector<double> parse_alpha_list(std::string_view text) {
  std::vector<double> alphas;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find(',', begin);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text.substr(begin, end - begin);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() ||
        !(value >= 0.0 && value <= 1.0)) {
      throw ConfigError("alpha must be a number in [0, 1], got '" + std::string(token) + "'");
    }
    alphas.push_back(value);
    begin = end + 1;
  }
  return alphas;
}

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

void print_exclusions(const ReportBundle& bundle, std::ostream& err) {
  for (const auto& e : bundle.exclusions) {
    err << "  excluded " << e.model_id;
    if (e.metric) err << " [" << to_string(*e.metric) << "]";
    err << ": " << e.reason << '\n';
  }
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SuiteConfig config = load_config(options.config);
    if (options.alphas) config.alphas = *options.alphas;
    if (options.intensity_g_per_kwh) {
      config.intensity.provider = "fixed";
      config.intensity.value_g_per_kwh = *options.intensity_g_per_kwh;
    }
    if (options.sample_interval_s) config.meter.sample_interval_s = *options.sample_interval_s;
    config.validate();

    const auto out_dir = resolve_output_dir(options.out, config.output_dir);
    auto meter = make_meter(config.meter);
    auto provider = make_intensity_provider(config.intensity);

    EvaluationOptions eval;
    eval.sample_interval_s = config.meter.sample_interval_s;
    eval.carbon_mode = config.intensity.mode;
    auto records = run_suite(config.models, config.devices, *meter, *provider, eval, options.observer);

    const SuiteMetadata metadata = describe(config);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    write_file(out_dir / kRecordsFileName, emit_records_file(metadata, records));
    const auto bundle = build_bundle(metadata, std::move(records));
    write_report_artifacts(bundle, out_dir);

    std::size_t ok = 0;
    for (const auto& r : bundle.records) ok += r.ok() ? 1 : 0;
    out << "evaluated " << bundle.records.size() << " model(s), " << ok << " ok; reports in "
        << out_dir.string() << '\n';
    if (ok == 0) {
      err << "error: every model failed\n";
      print_exclusions(bundle, err);
      return static_cast<int>(kExitNoResults);
    }
    if (ok < bundle.records.size()) {
      err << "warning: " << bundle.records.size() - ok << " model(s) failed\n";
      print_exclusions(bundle, err);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_score(const ScoreOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RecordsFile file = load_records_file(options.records);
    if (options.alphas) file.metadata.alphas = *options.alphas;
    std::vector<Metric> metrics(kAllMetrics.begin(), kAllMetrics.end());
    if (options.metric) metrics = {*options.metric};

    const auto bundle = build_bundle(file.metadata, std::move(file.records), metrics);
    bool any_points = false;
    for (const auto& t : bundle.tradeoffs) any_points = any_points || !t.points.empty();
    if (!any_points) {
      err << "error: no ok record carries "
          << (options.metric ? "metric " + std::string(to_string(*options.metric)) : "any metric")
          << '\n';
      return static_cast<int>(kExitNoResults);
    }
    const auto out_dir = resolve_output_dir(options.out, std::nullopt);
    write_report_artifacts(bundle, out_dir);
    out << "scored " << bundle.scores.size() << " table(s); reports in " << out_dir.string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_frontier(const FrontierOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RecordsFile file = load_records_file(options.records);
    const std::vector<Metric> metrics{options.metric};
    const auto bundle = build_bundle(file.metadata, std::move(file.records), metrics);
    const auto* t = bundle.tradeoff(options.metric);
    if (t == nullptr || t->points.empty()) {
      err << "error: no ok record carries metric " << to_string(options.metric) << '\n';
      return static_cast<int>(kExitNoResults);
    }
    for (const auto& p : t->frontier) {
      out << p.model_id << ' ' << format_double(p.c_total_g) << ' ' << format_double(p.p) << '\n';
    }
    const auto out_dir = resolve_output_dir(options.out, std::nullopt);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    write_file(out_dir / ("tradeoff_" + std::string(to_string(options.metric)) + ".svg"),
               emit_tradeoff_svg(bundle, options.metric));
    return static_cast<int>(kExitOk);
  });
}

}  // namespace carbench::cli
