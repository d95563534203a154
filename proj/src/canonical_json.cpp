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

#include "carbench/canonical_json.hpp"

#include <charconv>
#include <cmath>

#include "carbench/error.hpp"

namespace carbench {
namespace {

void dump_into(const nlohmann::json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann::json objects are std::map backed, so iteration is sorted.
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump_into(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        dump_into(v[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("cannot serialize a non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw ValidationError("float formatting failed");
  return std::string(buf, ptr);
}

std::string canonical_dump(const nlohmann::json& value) {
  std::string out;
  dump_into(value, 0, out);
  out += '\n';
  return out;
}

}  // namespace carbench
