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

#include "carbench/orchestrator.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>
#include <set>
#include <sstream>

#include "carbench/error.hpp"

namespace carbench {
namespace {

using SteadyClock = std::chrono::steady_clock;

// A workload that ran but did not succeed.
class PhaseFailure : public Error {
 public:
  using Error::Error;
};

PhaseEnergy run_phase(Phase phase, const WorkloadDescriptor& workload,
                      std::span<const DeviceCoefficients> devices, MeterBackend& meter,
                      const EvaluationOptions& options,
                      const std::map<std::string, std::string>& extra_env) {
  auto session = start_measurement(meter, devices, options.sample_interval_s, workload.phase_input());
  std::optional<ProcessOutcome> outcome;
  if (workload.kind() == WorkloadKind::child_process) {
    outcome = run_child_process(workload, extra_env);
  }
  PhaseEnergy energy = session.stop(phase);
  if (outcome && !outcome->ok()) {
    throw PhaseFailure(std::string(to_string(phase)) + " workload " + outcome->describe());
  }
  return energy;
}

double phase_emissions(const PhaseEnergy& phase, const CarbonIntensitySample& fixed_c,
                       IntensityProvider& provider, CarbonMode mode) {
  if (mode == CarbonMode::fixed_c) return emissions(joules_to_kwh(phase.energy_j), fixed_c);

  std::vector<CarbonIntensitySample> series;
  for (const auto& obs : provider.observed(phase.window.start, phase.window.stop)) {
    CarbonIntensitySample s = obs.sample;
    s.timestamp_s = std::chrono::duration<double>(obs.at - phase.window.start).count();
    if (!series.empty() && !(s.timestamp_s > series.back().timestamp_s)) {
      series.back() = s;
    } else {
      series.push_back(s);
    }
  }
  return emissions_time_weighted(phase, series);
}

}  // namespace

std::string_view to_string(RecordStatus status) {
  return status == RecordStatus::ok ? "ok" : "failed";
}

RecordStatus parse_record_status(std::string_view text) {
  if (text == "ok") return RecordStatus::ok;
  if (text == "failed") return RecordStatus::failed;
  throw ValidationError("unknown record status '" + std::string(text) + "'");
}

std::string_view to_string(CarbonMode mode) {
  return mode == CarbonMode::fixed_c ? "fixed_c" : "time_weighted";
}

CarbonMode parse_carbon_mode(std::string_view text) {
  if (text == "fixed_c") return CarbonMode::fixed_c;
  if (text == "time_weighted") return CarbonMode::time_weighted;
  throw ValidationError("unknown carbon mode '" + std::string(text) + "'");
}

void ModelSpec::validate() const {
  if (model_id.empty()) throw ValidationError("model_id must not be empty");
  if (metrics_source.empty()) {
    throw ValidationError("model '" + model_id + "' needs a metrics_source");
  }
  training.validate();
  inference.validate();
}

PerformanceMetrics read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read metrics file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  PerformanceMetrics metrics;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return metrics;

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(path.string() + ": metrics must be an object");
  for (Metric m : kAllMetrics) {
    auto it = doc.find(std::string(to_string(m)));
    if (it == doc.end() || it->is_null()) continue;
    if (!it->is_number()) {
      throw ValidationError(path.string() + ": metric " + std::string(to_string(m)) +
                            " is not a number");
    }
    metrics.set(m, it->get<double>());
  }
  return metrics;
}

EvaluationRecord evaluate_model(const ModelSpec& spec, std::span<const DeviceCoefficients> devices,
                                MeterBackend& meter, IntensityProvider& intensity,
                                const EvaluationOptions& options) {
  spec.validate();
  meter.check_compatible(spec.training.phase_input());
  meter.check_compatible(spec.inference.phase_input());

  EvaluationRecord record;
  record.model_id = spec.model_id;
  record.family = spec.family;
  record.dataset = spec.dataset;

  // Carbon service start. The remote provider polls on its own thread; this
  // only snapshots its cache.
  record.intensity = fetch_intensity(intensity);

  const std::map<std::string, std::string> env{
      {std::string(kMetricsPathEnv), std::filesystem::absolute(spec.metrics_source).string()}};
  try {
    record.training = run_phase(Phase::training, spec.training, devices, meter, options, env);
    record.inference = run_phase(Phase::inference, spec.inference, devices, meter, options, env);
    record.metrics = read_metrics(spec.metrics_source);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    record.status = RecordStatus::failed;
    record.failure_reason = e.what();
  }

  // Carbon service stop.
  record.intensity = fetch_intensity(intensity);
  if (record.failure_reason) return record;

  record.e_training_kwh = joules_to_kwh(record.training->energy_j);
  record.e_inference_kwh = joules_to_kwh(record.inference->energy_j);
  record.emissions = EmissionBreakdown::from_phases(
      phase_emissions(*record.training, record.intensity, intensity, options.carbon_mode),
      phase_emissions(*record.inference, record.intensity, intensity, options.carbon_mode));
  record.status = RecordStatus::ok;
  return record;
}

std::vector<EvaluationRecord> run_suite(std::span<const ModelSpec> specs,
                                        std::span<const DeviceCoefficients> devices,
                                        MeterBackend& meter, IntensityProvider& intensity,
                                        const EvaluationOptions& options,
                                        const RecordObserver& observer) {
  if (specs.empty()) throw ConfigError("suite has no models");
  if (devices.empty()) throw ConfigError("suite has no devices");
  try {
    validate_device_table({devices.begin(), devices.end()});
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  std::set<std::string> ids;
  for (const auto& spec : specs) {
    if (!ids.insert(spec.model_id).second) {
      throw ConfigError("duplicate model_id '" + spec.model_id + "'");
    }
    try {
      spec.validate();
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
    meter.check_compatible(spec.training.phase_input());
    meter.check_compatible(spec.inference.phase_input());
  }

  std::vector<EvaluationRecord> records;
  records.reserve(specs.size());
  for (const auto& spec : specs) {
    records.push_back(evaluate_model(spec, devices, meter, intensity, options));
    if (observer) observer(records.back());
  }
  return records;
}

}  // namespace carbench
