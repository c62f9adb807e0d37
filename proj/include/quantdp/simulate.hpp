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

#ifndef QUANTDP_SIMULATE_HPP_
#define QUANTDP_SIMULATE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "quantdp/linalg.hpp"
#include "quantdp/plant.hpp"
#include "quantdp/quantizers.hpp"

namespace quantdp {

enum class QuantizerKind {
  kIdentity,       // v = y
  kDeterministic,  // mid-tread rounding with d(k)
  kStatic,         // stochastic, constant d
  kDynamic,        // stochastic, zoom-in schedule
};

// Gaussian input noise N(0, sigma^2 I) added to u for k < cutoff.
struct NoisePolicy {
  double sigma = 0;
  long cutoff = 0;
};

struct SimulationConfig {
  LtiPlant plant;
  ExoSystem exo;
  FusionCenterGains gains;  // k_r must be populated
  QuantizerKind quantizer = QuantizerKind::kStatic;
  StepSchedule schedule;
  NoisePolicy noise;
  Vector x0;
  Vector x_hat0;
  Vector x_r0;
  long horizon = 1;
  std::uint64_t seed = 0;
};

// Column k of every matrix holds the signal at step k, for k < horizon.
// w is the input noise actually injected (zero after the cutoff); it is kept
// apart from u, which is the publicly visible controller output.
struct Trajectory {
  Matrix x;
  Matrix x_hat;
  Matrix x_r;
  Matrix y;
  Matrix v;
  Matrix u;
  Matrix w;
  Matrix e_y;
  Vector d;  // step size used at k (0 for the identity quantizer)

  long steps() const { return static_cast<long>(d.size()); }
};

inline constexpr double kDivergenceThreshold = 1e12;

void validate(const SimulationConfig& cfg);

// Runs one closed-loop realization. Randomness for run `run` is drawn from
// substreams keyed by (cfg.seed, run, k, component), so the result is
// bit-identical for a given (cfg, run) regardless of threading.
// Throws DivergenceError when a state norm exceeds kDivergenceThreshold.
Trajectory simulate_closed_loop(const SimulationConfig& cfg,
                                std::uint64_t run = 0);

// Runs 0..runs-1 in parallel; results are ordered by run index.
std::vector<Trajectory> simulate_ensemble(const SimulationConfig& cfg,
                                          long runs, int threads = 0);

// Runs first_run..first_run+count-1 in parallel, ordered by run index.
std::vector<Trajectory> simulate_batch(const SimulationConfig& cfg,
                                       long first_run, long count,
                                       int threads = 0);

/// Max defect when re-applying the state recursions to stored records.
double recursion_residual(const SimulationConfig& cfg, const Trajectory& traj);

struct CostEstimate {
  double j_hat = 0;
  double std_err = 0;
  long runs = 0;
};

// Time average of e_y^T Q e_y over steps [burn_in, burn_in + window).
double run_tracking_cost(const Trajectory& traj, const Matrix& q_weight,
                         long burn_in, long window);

// Mean of per-run window averages across the ensemble and its standard error.
CostEstimate estimate_tracking_cost(std::span<const Trajectory> trajectories,
                                    const Matrix& q_weight, long burn_in,
                                    long window);

// Same estimate without retaining trajectories; each worker reduces its run
// to one number and the runs are combined in index order.
CostEstimate monte_carlo_tracking_cost(const SimulationConfig& cfg, long runs,
                                       const Matrix& q_weight, long burn_in,
                                       long window, int threads = 0);

struct CostBound {
  double value = 0;
  double trace_z = 0;
  double trace_weight = 0;  // trace(H_p^T Q H_p)
  Matrix z;
};

// Upper bound (d^2 / 2) trace(H_p^T Q H_p) trace(Z) on the stationary tracking
// cost, where Z = F Z F^T + [I; I] L L^T [I; I]^T and F is
// closed_loop_matrix(plant, gains). Requires A + B K_x and A + L C Schur
// stable and K_r = U - K_x X; otherwise throws kHypothesisViolated.
CostBound tracking_cost_bound(const LtiPlant& plant, const ExoSystem& exo,
                              const FusionCenterGains& gains,
                              const Matrix& q_weight, double d);

struct QuantizationSample {
  double y = 0;
  double d = 1;
  double output = 0;
};

struct MomentReport {
  long count = 0;
  double mean = 0;
  double mean_std_err = 0;
  double second_moment = 0;
  double expected_second_moment = 0;  // average of z (d - z)
  double second_moment_std_err = 0;
  double correlation = 0;
  bool mean_ok = false;
  bool second_moment_ok = false;
  bool correlation_ok = true;

  bool all_ok() const { return mean_ok && second_moment_ok && correlation_ok; }
};

// Empirical check of the quantization error w = output - y: zero mean,
// second moment z (d - z), and no correlation between the paired draws in
// `at_k` and `at_l` (pass an empty span to skip). Each test passes when the
// deviation is within four standard errors. Needs at least 10^4 samples.
MomentReport quantization_error_moments(
    std::span<const QuantizationSample> at_k,
    std::span<const QuantizationSample> at_l = {});

}  // namespace quantdp

#endif  // QUANTDP_SIMULATE_HPP_
