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

#ifndef QUANTDP_PRIVACY_HPP_
#define QUANTDP_PRIVACY_HPP_

#include <optional>
#include <span>

#include "quantdp/linalg.hpp"
#include "quantdp/plant.hpp"
#include "quantdp/quantizers.hpp"

namespace quantdp {

// Certificate |A^k|_1 <= beta * lambda^k for 0 <= k <= k_max_checked.
struct ContractionEstimate {
  double beta = 1;
  double lambda = 1;
  int k_max_checked = 0;
};

// Target (epsilon, delta) over initial-state pairs with |x0 - x0'|_1 <= zeta.
struct PrivacyBudget {
  double epsilon = 0;
  double delta = 0.05;
  double zeta = 0.1;
};

// Number of released time steps minus one (k), or unbounded.
class Horizon {
 public:
  static Horizon finite(int k) { return Horizon(k); }
  static Horizon infinite() { return Horizon(-1); }

  bool is_infinite() const { return k_ < 0; }
  int last_step() const { return k_; }

 private:
  explicit Horizon(int k) : k_(k) {}
  int k_;
};

struct DynamicStepBound {
  std::optional<double> d0_min;
  std::optional<double> d_star_min;
};

// Quantizer schedule plus Gaussian input noise for plants whose A is not
// Schur stable. Noise with standard deviation sigma is injected for
// k < n_star; the mechanism is (epsilon0, delta1 + delta2)-private.
struct UnstableDesign {
  int n_star = 0;
  StepSchedule schedule;
  double sigma = 0;
  double epsilon0 = 0;
  double delta1 = 0;
  double delta2 = 0;
  // |Delta^{-1/2} A^{n*}|_2, the Gaussian-phase sensitivity per unit zeta.
  double noise_gain = 0;

  double epsilon() const { return epsilon0; }
  double delta() const { return delta1 + delta2; }
};

inline constexpr double kDefaultContractionMargin = 0.05;
inline constexpr int kDefaultContractionSweep = 2000;

// Fits (beta, lambda) by sweeping |A^k|_1 for k <= k_max.
//
// If the spectral radius is (numerically) at least one and the powers of A
// stay bounded, lambda = max(1, rho) is used without margin. Otherwise
// lambda = rho (1 + margin) and beta is the largest |A^k|_1 / lambda^k, which
// must have peaked: a ratio still increasing over the last quarter of the
// sweep raises kNotConverged.
ContractionEstimate estimate_beta_lambda(
    const Matrix& a, double margin = kDefaultContractionMargin,
    int k_max = kDefaultContractionSweep);

/// Re-checks |A^k|_1 <= beta lambda^k (relative slack 1e-9) for k <= k_max_checked.
bool verify_contraction(const Matrix& a, const ContractionEstimate& est);

// Smallest static step d giving (0, delta)-privacy over the horizon:
//   finite k:  sum_{t<=k} beta |C|_1 lambda^t zeta / delta
//   infinite:  beta |C|_1 zeta / ((1 - lambda) delta), needs lambda < 1.
double static_step_bound(const ContractionEstimate& est, double c_norm1,
                         double zeta, double delta, Horizon horizon);

// Zoom-in schedule requirements. d0_min is available for finite horizons and
// for infinite ones when lambda < q; d_star_min for finite horizons and for
// infinite ones when lambda < 1. Throws kUnsupportedRegime when neither is.
DynamicStepBound dynamic_step_bound(const ContractionEstimate& est,
                                    double c_norm1, double zeta, double delta,
                                    double q, Horizon horizon);

// delta achieved by a given schedule over steps 0..k:
//   sum_t beta |C|_1 lambda^t zeta / d(t).
double privacy_delta_bound(const ContractionEstimate& est, double c_norm1,
                           double zeta, const StepSchedule& schedule, int k);

double standard_normal_cdf(double x);

// Gaussian-mechanism privacy curve at sensitivity-to-noise ratio s:
//   Phi(s/2 - eps/s) - e^eps Phi(-s/2 - eps/s),  with value 0 at s = 0.
double kappa(double epsilon, double s);

/// Solves kappa(epsilon, s) = delta for s by bisection.
double kappa_inverse(double epsilon, double delta);

UnstableDesign design_unstable_mechanism(
    const LtiPlant& plant, const ContractionEstimate& est, double zeta,
    double epsilon0, double delta1, double delta2, double q,
    std::optional<double> d_star = std::nullopt);

inline constexpr int kAuditComponentLimit = 20;

// Exact hockey-stick divergence sup_S [P(S) - e^eps P'(S)] between the
// stochastic quantizer laws of two output stacks. Component i of a stack
// belongs to time step i / p with p = y.size() / steps.size(), and is
// quantized with steps[i / p]. At epsilon = 0 this is total variation.
double audit_zero_eps(std::span<const double> y, std::span<const double> y_prime,
                      std::span<const double> steps, double epsilon);

// Noiseless output stack O_k x0 + N_k U_k.
Vector mechanism_mean(const LtiPlant& plant, const Vector& x0,
                      const Vector& input_stack, int k);

}  // namespace quantdp

#endif  // QUANTDP_PRIVACY_HPP_
