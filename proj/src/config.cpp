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

#include "carbench/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "carbench/error.hpp"

namespace carbench {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

WorkloadDescriptor parse_workload(const json& j, const std::filesystem::path& base,
                                  const std::string& where) {
  check_keys(j, {"kind", "flops", "mem_accesses", "duration_s", "command", "path", "env", "cwd",
                 "timeout_s"},
             where);
  const auto kind = j.at("kind").get<std::string>();
  WorkloadDescriptor w;
  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (j.contains(k)) throw ConfigError(where + ": key '" + k + "' not valid for kind " + kind);
    }
  };
  if (kind == "counts_only") {
    reject({"command", "path"});
    w.payload = CountsOnlyWorkload{{get_or(j, "flops", 0.0), get_or(j, "mem_accesses", 0.0),
                                    get_or(j, "duration_s", 0.0)}};
  } else if (kind == "child_process") {
    reject({"flops", "mem_accesses", "duration_s", "path"});
    w.payload = ChildProcessWorkload{j.at("command").get<std::vector<std::string>>()};
  } else if (kind == "trace") {
    reject({"flops", "mem_accesses", "duration_s", "command"});
    w.payload = TraceWorkload{resolve(base, j.at("path").get<std::string>())};
  } else {
    throw ConfigError(where + ": unknown workload kind '" + kind + "'");
  }
  w.env = get_or(j, "env", std::map<std::string, std::string>{});
  if (j.contains("cwd")) w.working_dir = resolve(base, j.at("cwd").get<std::string>());
  w.timeout_s = get_or(j, "timeout_s", kDefaultWorkloadTimeoutS);
  return w;
}

}  // namespace

void SuiteConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  }
  if (publishable && !devices_configured) {
    throw ConfigError("publishable runs must configure their own device coefficients");
  }
  if (devices.empty()) throw ConfigError("no devices configured");
  try {
    validate_device_table(devices);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }

  if (!(meter.sample_interval_s > 0.0) || !std::isfinite(meter.sample_interval_s)) {
    throw ConfigError("sample_interval_s must be > 0");
  }
  if (meter.backend == "trace_replay" && devices.size() != 1) {
    throw ConfigError("trace_replay meters exactly one device");
  }
  if (meter.backend != "analytical" && meter.backend != "counter_file" &&
      meter.backend != "trace_replay") {
    throw ConfigError("unknown meter backend '" + meter.backend + "'");
  }

  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (intensity.provider == "fixed") {
    if (!positive(intensity.value_g_per_kwh)) throw ConfigError("intensity value must be > 0");
  } else if (intensity.provider == "file") {
    if (intensity.file.empty()) throw ConfigError("file intensity provider needs 'path'");
  } else if (intensity.provider == "remote") {
    if (intensity.url.empty()) throw ConfigError("remote intensity provider needs 'url'");
    if (!positive(intensity.poll_interval_s) || !positive(intensity.timeout_s)) {
      throw ConfigError("poll_interval_s and timeout_s must be > 0");
    }
  } else {
    throw ConfigError("unknown intensity provider '" + intensity.provider + "'");
  }
  if (intensity.fallback_g_per_kwh && !positive(*intensity.fallback_g_per_kwh)) {
    throw ConfigError("fallback_g_per_kwh must be > 0");
  }

  if (alphas.empty()) throw ConfigError("scas_alpha must name at least one value");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("scas_alpha values must lie in [0, 1]");
  }

  if (models.empty()) throw ConfigError("suite has no models");
  std::set<std::string> ids;
  const auto probe = make_meter(meter);
  for (const auto& m : models) {
    if (!ids.insert(m.model_id).second) throw ConfigError("duplicate model_id '" + m.model_id + "'");
    try {
      m.validate();
    } catch (const ValidationError& e) {
      throw ConfigError("model '" + m.model_id + "': " + e.what());
    }
    probe->check_compatible(m.training.phase_input());
    probe->check_compatible(m.inference.phase_input());
  }
}

SuiteConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  SuiteConfig cfg;
  try {
    check_keys(doc, {"schema_version", "publishable", "devices", "meter", "intensity", "scas_alpha",
                     "output_dir", "models"},
               "config");
    if (!doc.contains("schema_version")) throw ConfigError("config needs schema_version");
    cfg.schema_version = doc.at("schema_version").get<int>();
    cfg.publishable = get_or(doc, "publishable", false);

    if (auto it = doc.find("devices"); it != doc.end()) {
      cfg.devices_configured = true;
      for (const auto& d : *it) {
        check_keys(d, {"device_id", "device_kind", "alpha_d", "beta_d", "p_static"}, "device");
        DeviceCoefficients c;
        c.device_id = d.at("device_id").get<std::string>();
        c.device_kind = parse_device_kind(get_or<std::string>(d, "device_kind", "cpu"));
        c.alpha_d = d.at("alpha_d").get<double>();
        c.beta_d = d.at("beta_d").get<double>();
        c.p_static = d.at("p_static").get<double>();
        cfg.devices.push_back(std::move(c));
      }
    } else {
      cfg.devices = illustrative_device_table();
    }

    if (auto it = doc.find("meter"); it != doc.end()) {
      check_keys(*it, {"backend", "sample_interval_s", "counter_root", "device_dirs", "trace_path"},
                 "meter");
      cfg.meter.backend = get_or<std::string>(*it, "backend", "analytical");
      cfg.meter.sample_interval_s = get_or(*it, "sample_interval_s", kDefaultSampleIntervalS);
      if (it->contains("counter_root")) {
        cfg.meter.counter_root = resolve(base_dir, it->at("counter_root").get<std::string>());
      }
      for (const auto& [id, dir] : get_or(*it, "device_dirs", std::map<std::string, std::string>{})) {
        cfg.meter.device_dirs[id] = resolve(base_dir, dir);
      }
      if (it->contains("trace_path")) {
        cfg.meter.trace_path = resolve(base_dir, it->at("trace_path").get<std::string>());
      }
    }

    if (auto it = doc.find("intensity"); it != doc.end()) {
      check_keys(*it, {"provider", "value_g_per_kwh", "path", "url", "poll_interval_s", "timeout_s",
                       "fallback_g_per_kwh", "mode"},
                 "intensity");
      auto& ic = cfg.intensity;
      ic.provider = get_or<std::string>(*it, "provider", "fixed");
      ic.value_g_per_kwh = get_or(*it, "value_g_per_kwh", kDefaultIntensityGPerKwh);
      if (it->contains("path")) ic.file = resolve(base_dir, it->at("path").get<std::string>());
      ic.url = get_or<std::string>(*it, "url", "");
      ic.poll_interval_s = get_or(*it, "poll_interval_s", kDefaultRemotePollIntervalS);
      ic.timeout_s = get_or(*it, "timeout_s", 5.0);
      if (auto fb = it->find("fallback_g_per_kwh"); fb != it->end()) {
        ic.fallback_g_per_kwh = fb->is_null() ? std::nullopt : std::optional<double>(fb->get<double>());
      }
      ic.mode = parse_carbon_mode(get_or<std::string>(*it, "mode", "fixed_c"));
    }

    if (auto it = doc.find("scas_alpha"); it != doc.end()) {
      cfg.alphas = it->is_array() ? it->get<std::vector<double>>()
                                  : std::vector<double>{it->get<double>()};
    }
    if (auto it = doc.find("output_dir"); it != doc.end()) {
      cfg.output_dir = resolve(base_dir, it->get<std::string>());
    }

    const auto& models = doc.at("models");
    if (!models.is_array()) throw ConfigError("models must be an array");
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto& m = models[i];
      const std::string where = "models[" + std::to_string(i) + "]";
      check_keys(m, {"model_id", "family", "dataset", "metrics_source", "training", "inference"},
                 where);
      ModelSpec spec;
      spec.model_id = m.at("model_id").get<std::string>();
      spec.family = get_or<std::string>(m, "family", "");
      spec.dataset = get_or<std::string>(m, "dataset", "");
      spec.metrics_source = resolve(base_dir, m.at("metrics_source").get<std::string>());
      spec.training = parse_workload(m.at("training"), base_dir, where + ".training");
      spec.inference = parse_workload(m.at("inference"), base_dir, where + ".inference");
      cfg.models.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SuiteConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, std::filesystem::absolute(path).parent_path());
}

std::unique_ptr<MeterBackend> make_meter(const MeterConfig& config) {
  if (config.backend == "analytical") return std::make_unique<AnalyticalBackend>();
  if (config.backend == "counter_file") {
    return std::make_unique<CounterFileBackend>(config.counter_root, config.device_dirs);
  }
  if (config.backend == "trace_replay") return std::make_unique<TraceReplayBackend>(config.trace_path);
  throw ConfigError("unknown meter backend '" + config.backend + "'");
}

std::unique_ptr<IntensityProvider> make_intensity_provider(const IntensityConfig& config) {
  try {
    if (config.provider == "fixed") {
      return std::make_unique<FixedIntensityProvider>(config.value_g_per_kwh);
    }
    if (config.provider == "file") {
      return std::make_unique<FileIntensityProvider>(config.file, config.fallback_g_per_kwh);
    }
    if (config.provider == "remote") {
      return std::make_unique<RemoteIntensityProvider>(RemoteIntensityOptions{
          config.url, config.poll_interval_s, config.timeout_s, config.fallback_g_per_kwh});
    }
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown intensity provider '" + config.provider + "'");
}

SuiteMetadata describe(const SuiteConfig& config) {
  SuiteMetadata m;
  m.publishable = config.publishable;
  m.coefficients_source = config.devices_configured ? "configured" : "illustrative";
  m.devices = config.devices;
  m.meter_backend = config.meter.backend;
  m.sample_interval_s = config.meter.sample_interval_s;
  m.intensity_provider = config.intensity.provider;
  m.intensity_configured_g_per_kwh = config.intensity.provider == "fixed"
                                         ? std::optional<double>(config.intensity.value_g_per_kwh)
                                         : config.intensity.fallback_g_per_kwh;
  m.carbon_mode = config.intensity.mode;
  m.alphas = config.alphas;
  return m;
}

}  // namespace carbench
