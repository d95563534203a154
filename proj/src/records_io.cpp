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

#include <fstream>
#include <iterator>

#include "carbench/canonical_json.hpp"
#include "carbench/error.hpp"
#include "carbench/report.hpp"

namespace carbench {

using nlohmann::json;

namespace {

json device_to_json(const DeviceCoefficients& d) {
  return {{"device_id", d.device_id},
          {"device_kind", to_string(d.device_kind)},
          {"alpha_d", d.alpha_d},
          {"beta_d", d.beta_d},
          {"p_static", d.p_static}};
}

DeviceCoefficients device_from_json(const json& j) {
  DeviceCoefficients d;
  d.device_id = j.at("device_id").get<std::string>();
  d.device_kind = parse_device_kind(j.at("device_kind").get<std::string>());
  d.alpha_d = j.at("alpha_d").get<double>();
  d.beta_d = j.at("beta_d").get<double>();
  d.p_static = j.at("p_static").get<double>();
  d.validate();
  return d;
}

json intensity_to_json(const CarbonIntensitySample& s) {
  return {{"value_g_per_kwh", s.value_g_per_kwh},
          {"timestamp_s", s.timestamp_s},
          {"source", to_string(s.source)}};
}

CarbonIntensitySample intensity_from_json(const json& j) {
  CarbonIntensitySample s;
  s.value_g_per_kwh = j.at("value_g_per_kwh").get<double>();
  s.timestamp_s = j.at("timestamp_s").get<double>();
  s.source = parse_intensity_source(j.at("source").get<std::string>());
  return s;
}

json phase_to_json(const PhaseEnergy& p, bool with_trails) {
  json devices = json::array();
  for (const auto& t : p.trails) {
    json d = {{"device_id", t.device_id},
              {"rule", to_string(t.rule)},
              {"max_range_uj", t.max_range_uj},
              {"duration_s", t.duration_s},
              {"energy_j", t.energy_j},
              {"sample_count", t.samples.size()}};
    if (with_trails) {
      json samples = json::array();
      for (const auto& s : t.samples) {
        samples.push_back({s.timestamp_s, s.value, to_string(s.kind)});
      }
      d["samples"] = std::move(samples);
    }
    devices.push_back(std::move(d));
  }
  return {{"phase", to_string(p.phase)},
          {"energy_j", p.energy_j},
          {"duration_s", p.duration_s},
          {"backend_id", p.backend_id},
          {"devices", std::move(devices)}};
}

PhaseEnergy phase_from_json(const json& j) {
  PhaseEnergy p;
  p.phase = parse_phase(j.at("phase").get<std::string>());
  p.energy_j = j.at("energy_j").get<double>();
  p.duration_s = j.at("duration_s").get<double>();
  p.backend_id = j.at("backend_id").get<std::string>();
  for (const auto& d : j.at("devices")) {
    DeviceTrail t;
    t.device_id = d.at("device_id").get<std::string>();
    t.rule = parse_integration_rule(d.at("rule").get<std::string>());
    t.max_range_uj = d.at("max_range_uj").get<std::uint64_t>();
    t.duration_s = d.at("duration_s").get<double>();
    t.energy_j = d.at("energy_j").get<double>();
    if (auto it = d.find("samples"); it != d.end()) {
      for (const auto& s : *it) {
        t.samples.push_back({s.at(0).get<double>(), parse_reading_kind(s.at(2).get<std::string>()),
                             s.at(1).get<double>(), t.device_id});
      }
    }
    p.trails.push_back(std::move(t));
  }
  return p;
}

}  // namespace

json to_json(const SuiteMetadata& m) {
  json devices = json::array();
  for (const auto& d : m.devices) devices.push_back(device_to_json(d));
  return {{"tool", {{"name", kToolName}, {"version", m.tool_version}}},
          {"publishable", m.publishable},
          {"coefficients_source", m.coefficients_source},
          {"devices", std::move(devices)},
          {"meter", {{"backend", m.meter_backend}, {"sample_interval_s", m.sample_interval_s}}},
          {"intensity",
           {{"provider", m.intensity_provider},
            {"configured_g_per_kwh", m.intensity_configured_g_per_kwh
                                         ? json(*m.intensity_configured_g_per_kwh)
                                         : json(nullptr)},
            {"mode", to_string(m.carbon_mode)}}},
          {"alphas", m.alphas}};
}

SuiteMetadata metadata_from_json(const json& j) {
  SuiteMetadata m;
  m.tool_version = j.at("tool").at("version").get<std::string>();
  m.publishable = j.at("publishable").get<bool>();
  m.coefficients_source = j.at("coefficients_source").get<std::string>();
  for (const auto& d : j.at("devices")) m.devices.push_back(device_from_json(d));
  m.meter_backend = j.at("meter").at("backend").get<std::string>();
  m.sample_interval_s = j.at("meter").at("sample_interval_s").get<double>();
  const auto& in = j.at("intensity");
  m.intensity_provider = in.at("provider").get<std::string>();
  const auto& configured = in.at("configured_g_per_kwh");
  m.intensity_configured_g_per_kwh =
      configured.is_null() ? std::nullopt : std::optional<double>(configured.get<double>());
  m.carbon_mode = parse_carbon_mode(in.at("mode").get<std::string>());
  m.alphas = j.at("alphas").get<std::vector<double>>();
  return m;
}

json to_json(const EvaluationRecord& r, bool with_trails) {
  json metrics = json::object();
  for (Metric m : kAllMetrics) {
    if (auto v = r.metrics.get(m)) metrics[std::string(to_string(m))] = *v;
  }
  json j = {{"model_id", r.model_id},
            {"family", r.family},
            {"dataset", r.dataset},
            {"status", to_string(r.status)},
            {"failure_reason", r.failure_reason ? json(*r.failure_reason) : json(nullptr)},
            {"metrics", std::move(metrics)},
            {"intensity", intensity_to_json(r.intensity)}};
  if (r.ok()) {
    j["e_training_kwh"] = r.e_training_kwh;
    j["e_inference_kwh"] = r.e_inference_kwh;
    j["emissions"] = {{"c_training_g", r.emissions.c_training_g},
                      {"c_inference_g", r.emissions.c_inference_g},
                      {"c_total_g", r.emissions.c_total_g}};
  }
  json phases = json::object();
  if (r.training) phases["training"] = phase_to_json(*r.training, with_trails);
  if (r.inference) phases["inference"] = phase_to_json(*r.inference, with_trails);
  j["phases"] = std::move(phases);
  return j;
}

EvaluationRecord record_from_json(const json& j) {
  EvaluationRecord r;
  r.model_id = j.at("model_id").get<std::string>();
  r.family = j.at("family").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.status = parse_record_status(j.at("status").get<std::string>());
  if (const auto& reason = j.at("failure_reason"); !reason.is_null()) {
    r.failure_reason = reason.get<std::string>();
  }
  for (const auto& [key, value] : j.at("metrics").items()) {
    r.metrics.set(parse_metric(key), value.get<double>());
  }
  r.intensity = intensity_from_json(j.at("intensity"));
  if (r.ok()) {
    r.e_training_kwh = j.at("e_training_kwh").get<double>();
    r.e_inference_kwh = j.at("e_inference_kwh").get<double>();
    const auto& e = j.at("emissions");
    r.emissions = {e.at("c_training_g").get<double>(), e.at("c_inference_g").get<double>(),
                   e.at("c_total_g").get<double>()};
  }
  const auto& phases = j.at("phases");
  if (auto it = phases.find("training"); it != phases.end()) r.training = phase_from_json(*it);
  if (auto it = phases.find("inference"); it != phases.end()) r.inference = phase_from_json(*it);
  return r;
}

std::string emit_records_file(const SuiteMetadata& metadata,
                              std::span<const EvaluationRecord> records) {
  json list = json::array();
  for (const auto& r : records) list.push_back(to_json(r, true));
  return canonical_dump({{"schema_version", kReportSchemaVersion},
                         {"kind", "records"},
                         {"metadata", to_json(metadata)},
                         {"records", std::move(list)}});
}

RecordsFile parse_records_file(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kReportSchemaVersion ||
        doc.at("kind").get<std::string>() != "records") {
      throw ValidationError("not a records file of schema version " +
                            std::to_string(kReportSchemaVersion));
    }
    RecordsFile out;
    out.metadata = metadata_from_json(doc.at("metadata"));
    for (const auto& r : doc.at("records")) out.records.push_back(record_from_json(r));
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed records file: ") + e.what());
  }
}

RecordsFile load_records_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read records file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_records_file(text);
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace carbench
