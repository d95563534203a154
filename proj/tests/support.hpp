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

// Helpers shared by the unit and acceptance binaries.

#ifndef CARBENCH_TESTS_SUPPORT_HPP_
#define CARBENCH_TESTS_SUPPORT_HPP_

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace carbench::testing {

inline bool rel_close(double a, double b, double rel) {
  if (a == b) return true;
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * scale;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("carbench-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CARBENCH_FIXTURES_DIR) / name;
}

/// Seeded generator wrapper so each property test can log its seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  /// Log-uniform magnitude in [10^lo_exp, 10^hi_exp].
  double magnitude(double lo_exp, double hi_exp) { return std::pow(10.0, uniform(lo_exp, hi_exp)); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Compares against tests/golden/<name>. With CARBENCH_UPDATE_GOLDEN=1 set,
/// rewrites the file instead and reports a match.
inline bool matches_golden(const std::string& name, const std::string& actual) {
  const auto path = std::filesystem::path(CARBENCH_GOLDEN_DIR) / name;
  if (const char* update = std::getenv("CARBENCH_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    write_text(path, actual);
    return true;
  }
  return std::filesystem::exists(path) && read_text(path) == actual;
}

/// Value of the first `attr="..."` after position `from` in an SVG/XML text.
inline std::string attr_after(const std::string& text, const std::string& attr, std::size_t from = 0) {
  const std::string key = " " + attr + "=\"";
  const auto at = text.find(key, from);
  if (at == std::string::npos) return {};
  const auto begin = at + key.size();
  return text.substr(begin, text.find('"', begin) - begin);
}

/// Every opening tag starting with `prefix` (e.g. `<g class="point"`).
inline std::vector<std::string> tags_with(const std::string& text, const std::string& prefix) {
  std::vector<std::string> out;
  for (auto at = text.find(prefix); at != std::string::npos; at = text.find(prefix, at + 1)) {
    out.push_back(text.substr(at, text.find('>', at) - at + 1));
  }
  return out;
}

}  // namespace carbench::testing

#endif  // CARBENCH_TESTS_SUPPORT_HPP_
