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

#ifndef FOCE_EXPERIMENT_H_
#define FOCE_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "foce/key_value.h"

namespace foce {

// Exit statuses of run_experiment.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitBoundFailed = 2;

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::optional<std::filesystem::path> out_dir;
  // Relative paths inside the config resolve against this directory.
  std::filesystem::path base_dir = ".";
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

// Dispatches on `mode` and writes artifacts under the output directory.
// Throws InputError or ConfigError on bad configs; main maps those to exit 1.
RunResult run_experiment(const KeyValueDocument& config, const RunOptions& options);

// Dry run: resolved dimensions, constants, set class and the applicable bound.
std::string describe_experiment(const KeyValueDocument& config, const RunOptions& options);

// Lists every config key with a one-line description.
std::string config_reference();

}  // namespace foce

#endif  // FOCE_EXPERIMENT_H_
