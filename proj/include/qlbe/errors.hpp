// Copyright 2026 The QLBE Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qlbe {

inline constexpr const char* kVersion = "0.1.0";

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two inputs that must agree (grid sizes, vector dimensions) do not.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Gas components with different molecular masses were mixed.
class UnsupportedMixture : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. `key()` names the offending setting when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A quadrature failed its convergence or resolution check.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// An evolution monitor (positivity, edge population) tripped.
class RunInvalidated : public Error {
 public:
  RunInvalidated(const std::string& what, double time)
      : Error(what + " at t = " + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace qlbe
