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

#ifndef CARBENCH_ERROR_HPP_
#define CARBENCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace carbench {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violated a documented domain invariant (negative energy, NaN, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Suite or provider configuration is unusable. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An API was called out of order (double stop, overlapping sessions).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A meter backend could not start or read its source.
class BackendError : public Error {
 public:
  BackendError(const std::string& backend, const std::string& what)
      : Error(backend + ": " + what), backend_(backend) {}

  const std::string& backend() const noexcept { return backend_; }

 private:
  std::string backend_;
};

/// File system failure while reading inputs or writing artifacts. Exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace carbench

#endif  // CARBENCH_ERROR_HPP_
