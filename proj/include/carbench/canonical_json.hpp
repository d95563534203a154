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

#ifndef CARBENCH_CANONICAL_JSON_HPP_
#define CARBENCH_CANONICAL_JSON_HPP_

#include <json.hpp>
#include <string>

namespace carbench {

/// Shortest decimal that parses back to exactly `value`. Throws
/// ValidationError for NaN and infinities.
std::string format_double(double value);

/// Deterministic rendering: keys sorted, two-space indent, doubles in
/// shortest round-trip form, trailing newline.
std::string canonical_dump(const nlohmann::json& value);

}  // namespace carbench

#endif  // CARBENCH_CANONICAL_JSON_HPP_
