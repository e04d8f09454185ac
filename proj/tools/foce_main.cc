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

// Command-line front end: `foce run` and `foce describe`.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "foce/errors.h"
#include "foce/experiment.h"
#include "foce/key_value.h"

namespace {

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--config", args.config, "experiment config (key = value text)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "overrides the config seed");
  cmd->add_option("--out", args.out, "artifact directory (overrides `output`)");
}

foce::RunOptions options_for(const Args& args) {
  foce::RunOptions opt;
  opt.seed = args.seed;
  if (args.out) opt.out_dir = std::filesystem::path(*args.out);
  opt.base_dir = std::filesystem::path(args.config).parent_path();
  if (opt.base_dir.empty()) opt.base_dir = ".";
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient dynamics, regret audits and equilibrium certificates for smooth games"};
  app.require_subcommand(1);
  Args args;
  CLI::App* run = app.add_subcommand("run", "run one experiment and write its artifacts");
  CLI::App* describe = app.add_subcommand("describe", "print the resolved plan without running");
  CLI::App* keys = app.add_subcommand("keys", "list config keys");
  add_common(run, args);
  add_common(describe, args);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : foce::kExitInputError;
  }

  if (keys->parsed()) {
    std::cout << foce::config_reference();
    return foce::kExitOk;
  }
  try {
    const foce::KeyValueDocument config = foce::KeyValueDocument::load(args.config);
    if (describe->parsed()) {
      std::cout << foce::describe_experiment(config, options_for(args));
      return foce::kExitOk;
    }
    const foce::RunResult result = foce::run_experiment(config, options_for(args));
    std::cout << result.summary;
    for (const auto& p : result.artifacts) std::cout << "artifact = " << p.string() << "\n";
    return result.exit_code;
  } catch (const foce::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return foce::kExitInputError;
  } catch (const foce::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return foce::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return foce::kExitInputError;
  }
}
