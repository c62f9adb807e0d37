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

#ifndef QUANTDP_QUANTIZERS_HPP_
#define QUANTDP_QUANTIZERS_HPP_

#include <cstdint>
#include <random>

#include "quantdp/linalg.hpp"

namespace quantdp {

// Step-size schedule d(k) = d_star + (d0 - d_star) q^k. With q = 1 and
// d_star = d0 it is the static quantizer.
struct StepSchedule {
  double d0 = 1;
  double d_star = 1;
  double q = 1;

  static StepSchedule fixed(double d) { return StepSchedule{d, d, 1}; }

  bool is_static() const { return q == 1; }
};

// Throws kValidation unless 0 <= d_star <= d0, d0 > 0, q in (0, 1] and
// d_star == d0 whenever q == 1.
void validate(const StepSchedule& schedule);

double step_at(const StepSchedule& schedule, long k);

// Uniform mid-tread quantizer: returns n d for y in (n d - d/2, n d + d/2].
double quantize_deterministic(double y, double d);

// Output law of the stochastic quantizer at input y: with y = z + n d,
// z in (0, d], the output is n d w.p. 1 - z/d and (n + 1) d w.p. z/d.
struct TwoPointPmf {
  std::int64_t lo_index = 0;  // n
  double lo_value = 0;        // n d
  double hi_value = 0;        // (n + 1) d
  double p_hi = 0;

  double p_lo() const { return 1 - p_hi; }
  double mean() const { return lo_value * p_lo() + hi_value * p_hi; }
  double variance() const {
    const double step = hi_value - lo_value;
    return step * step * p_hi * p_lo();
  }
  // Probability of grid point index*d.
  double prob_at(std::int64_t index) const {
    if (index == lo_index) return p_lo();
    if (index == lo_index + 1) return p_hi;
    return 0;
  }
};

// Inputs within 1e-12 (relative, in units of d) of a grid point are treated
// as lying on it and produce a point mass there (p_hi = 1).
TwoPointPmf output_pmf(double y, double d);

/// One draw from output_pmf(y, d) by inversion of a uniform variate.
template <typename Urbg>
double quantize_stochastic(double y, double d, Urbg& rng) {
  const TwoPointPmf pmf = output_pmf(y, d);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < pmf.p_hi ? pmf.hi_value : pmf.lo_value;
}

/// Componentwise independent stochastic quantization.
template <typename Urbg>
Vector quantize_vector(const Vector& y, double d, Urbg& rng) {
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out(i) = quantize_stochastic(y(i), d, rng);
  }
  return out;
}

/// Exact total variation between the two output laws.
double total_variation(const TwoPointPmf& lhs, const TwoPointPmf& rhs);

}  // namespace quantdp

#endif  // QUANTDP_QUANTIZERS_HPP_
