// Copyright 2026 The foce Authors. All rights reserved.
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

#ifndef FOCE_ERRORS_H_
#define FOCE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace foce {

// Caller supplied something malformed (dimension mismatch, infeasible point,
// bad schedule, unknown config key).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A config entry failed to parse or validate. `key()` names the entry.
class ConfigError : public InputError {
 public:
  ConfigError(std::string key, const std::string& what)
      : InputError(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// The requested quantity is not defined for this object, e.g. acuteness of a
// ball or a finite-difference audit without a utility evaluator.
class NotApplicableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A velocity was requested at a kink of the projected curve.
class BreakpointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative routine hit its cap or lost accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace foce

#endif  // FOCE_ERRORS_H_
