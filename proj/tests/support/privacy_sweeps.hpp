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

// Randomized soundness sweeps for the step-size designers, shared by the unit
// and acceptance suites.

#ifndef QUANTDP_TESTS_SUPPORT_PRIVACY_SWEEPS_HPP_
#define QUANTDP_TESTS_SUPPORT_PRIVACY_SWEEPS_HPP_

#include <algorithm>
#include <random>
#include <vector>

#include "quantdp/privacy.hpp"
#include "support/fixtures.hpp"

namespace quantdp::sweep {

struct SweepResult {
  int cases = 0;
  int violations = 0;
  double worst_ratio = 0;  // max audited divergence / delta
};

// Scalar Schur plants with |a| in (0.1, 0.9), horizons 0..4, adjacent initial
// states x0 and x0 + zeta. When `dynamic` is set the schedule is geometric
// with q drawn in (lambda, 1) and d0 taken from the dynamic designer.
inline SweepResult designer_soundness(bool dynamic, int cases, double delta,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SweepResult result;
  for (int trial = 0; trial < cases; ++trial) {
    const double a = (0.1 + 0.8 * unit(rng)) * (unit(rng) < 0.5 ? -1 : 1);
    const double c = 0.5 + unit(rng);
    const LtiPlant plant = fixture::scalar_plant(a, 1, c);
    const ContractionEstimate est = estimate_beta_lambda(plant.a);
    const int k = trial % 5;
    const double zeta = 0.05 + 0.2 * unit(rng);
    StepSchedule schedule;
    if (dynamic) {
      const double q = est.lambda + (1 - est.lambda) * (0.05 + 0.9 * unit(rng));
      const DynamicStepBound bound =
          dynamic_step_bound(est, std::abs(c), zeta, delta, q, Horizon::finite(k));
      schedule = StepSchedule{*bound.d0_min, 0.0, q};
    } else {
      schedule = StepSchedule::fixed(
          static_step_bound(est, std::abs(c), zeta, delta, Horizon::finite(k)));
    }
    std::vector<double> steps;
    for (int t = 0; t <= k; ++t) steps.push_back(step_at(schedule, t));

    const Vector x0 = Vector::Constant(1, 4 * (unit(rng) - 0.5));
    const Vector x0_prime = x0 + Vector::Constant(1, unit(rng) < 0.5 ? zeta : -zeta);
    const Vector y = mechanism_mean(plant, x0, Vector(), k);
    const Vector y_prime = mechanism_mean(plant, x0_prime, Vector(), k);
    const double divergence =
        audit_zero_eps({y.data(), std::size_t(y.size())},
                       {y_prime.data(), std::size_t(y_prime.size())}, steps, 0.0);
    ++result.cases;
    if (divergence > delta + 1e-12) ++result.violations;
    result.worst_ratio = std::max(result.worst_ratio, divergence / delta);
  }
  return result;
}

}  // namespace quantdp::sweep

#endif  // QUANTDP_TESTS_SUPPORT_PRIVACY_SWEEPS_HPP_
