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

#ifndef QUANTDP_CLI_SCENARIO_HPP_
#define QUANTDP_CLI_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "quantdp/plant.hpp"
#include "quantdp/quantizers.hpp"
#include "quantdp/simulate.hpp"

namespace quantdp::cli {

struct QuantizerSection {
  QuantizerKind kind = QuantizerKind::kStatic;
  StepSchedule schedule;
};

// Either a single (epsilon, delta) target or the split budget
// (epsilon0, delta1, delta2) used with Gaussian input noise.
struct PrivacySection {
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> zeta;
  std::optional<double> epsilon0;
  std::optional<double> delta1;
  std::optional<double> delta2;

  bool has_split_budget() const { return epsilon0 && delta1 && delta2; }
};

struct SimSection {
  long horizon = 1000;
  long runs = 100;
  std::optional<long> burn_in;
  std::optional<long> window;
  std::uint64_t seed = 0;

  long effective_burn_in() const { return burn_in.value_or(horizon / 2); }
  long effective_window() const {
    return window.value_or(horizon - effective_burn_in());
  }
};

struct ScenarioConfig {
  LtiPlant plant;
  ExoSystem exo;
  FusionCenterGains gains;
  bool k_r_derived = false;
  QuantizerSection quantizer;
  NoisePolicy noise;
  PrivacySection privacy;
  SimSection sim;
  Vector x0;
  Vector x_hat0;
  Vector x_r0;
};

// Parses and validates a scenario. Unknown keys, wrong shapes and
// out-of-range values raise Error(kValidation) or Error(kDimension). When
// gains.k_r is absent it is derived as U - K_x X from the regulator equations.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);

nlohmann::json to_json(const ScenarioConfig& cfg);

SimulationConfig to_simulation_config(const ScenarioConfig& cfg);

// Built-in vehicle tracking example (double integrator per axis, tau = 0.1).
// static variant: d = 4 with Gaussian input noise sigma^2 = 5 for two steps;
// dynamic variant: d0 = 10, d* = 0, q = 0.99, same noise phase.
ScenarioConfig vehicle_scenario(bool dynamic);

// Built-in scalar motivating example: A = -1, B = 0.2, C = H_p = 1,
// A_r = 0, H_r = 1, L = -1, K_x = 1, K_r = 0, x0 = -0.8, d = 2.
ScenarioConfig motivating_scenario(QuantizerKind kind);

}  // namespace quantdp::cli

#endif  // QUANTDP_CLI_SCENARIO_HPP_
