//
// Copyright 2026 The quantdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "quantdp/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quantdp: privacy-preserving quantized output regulation"};
  app.require_subcommand(1);

  quantdp::cli::CliOptions options;
  std::uint64_t seed = 0;
  long runs = 0;
  long horizon = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"check", "Check the standing assumptions for a scenario"},
      {"design", "Choose quantizer step sizes for a privacy budget"},
      {"simulate", "Run Monte Carlo closed-loop simulations"},
      {"audit", "Compute the exact privacy divergence of a short horizon"},
      {"bound", "Evaluate the stationary tracking-cost bound"},
      {"repro", "Recompute the bundled vehicle and scalar examples"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (std::string(name) != "repro") {
      sub->add_option("--config", options.config_path, "Scenario JSON file")
          ->required()
          ->check(CLI::ExistingFile);
    }
    sub->add_option("--out", options.out_dir, "Directory for output files");
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--runs", runs, "Override the number of runs")
        ->check(CLI::PositiveNumber);
    sub->add_option("--horizon", horizon, "Override the horizon")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", options.quiet, "Suppress standard output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : quantdp::cli::kExitValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) options.seed = seed;
  if (chosen->count("--runs")) options.runs = runs;
  if (chosen->count("--horizon")) options.horizon = horizon;
  return quantdp::cli::run_subcommand(chosen->get_name(), options, std::cout,
                                      std::cerr);
}
