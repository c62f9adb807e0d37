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

#include "quantdp/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quantdp/error.hpp"

namespace quantdp {
namespace {

void require_delta(double delta, const char* name) {
  if (!(delta > 0 && delta < 1)) {
    throw Error(ErrorCode::kValidation,
                std::string(name) + " must lie in (0, 1), got " +
                    std::to_string(delta));
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0) || !std::isfinite(value)) {
    throw Error(ErrorCode::kValidation,
                std::string(name) + " must be finite and >= 0");
  }
}

void require_estimate(const ContractionEstimate& est) {
  if (!(est.beta > 0) || !(est.lambda > 0) || !std::isfinite(est.beta) ||
      !std::isfinite(est.lambda)) {
    throw Error(ErrorCode::kValidation, "contraction estimate must be positive");
  }
}

// log |A^k|_1 for k = 0..k_max, with renormalization so that unstable
// matrices do not overflow.
std::vector<double> log_power_norms(const Matrix& a, int k_max) {
  std::vector<double> out;
  out.reserve(k_max + 1);
  Matrix power = Matrix::Identity(a.rows(), a.cols());
  double log_scale = 0;
  for (int k = 0; k <= k_max; ++k) {
    const double norm = induced_norm_1(power);
    out.push_back(norm > 0 ? std::log(norm) + log_scale
                           : -std::numeric_limits<double>::infinity());
    if (norm > 0) {
      power /= norm;
      log_scale += std::log(norm);
    }
    power = a * power;
  }
  return out;
}

// True when the final quarter of the sequence stays below the maximum reached
// before it, i.e. the sequence has already peaked. Oscillating but decaying
// sequences (complex eigenvalues) pass; steadily growing ones do not.
bool settled(const std::vector<double>& log_values) {
  const std::size_t start = log_values.size() - log_values.size() / 4 - 1;
  const double earlier =
      *std::max_element(log_values.begin(), log_values.begin() + start + 1);
  const double tail = *std::max_element(log_values.begin() + start, log_values.end());
  return tail <= earlier + 1e-9;
}

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0;
  double compensation_ = 0;
};

}  // namespace

ContractionEstimate estimate_beta_lambda(const Matrix& a, double margin,
                                         int k_max) {
  require_square(a, "A");
  require_finite(a, "A");
  require_nonnegative(margin, "margin");
  if (k_max < 1) throw Error(ErrorCode::kValidation, "k_max must be >= 1");

  const double rho = spectral_radius(a);
  const std::vector<double> log_norms = log_power_norms(a, k_max);
  const bool bounded_powers = settled(log_norms) && rho <= 1 + 1e-9;

  ContractionEstimate est;
  est.k_max_checked = k_max;
  if (bounded_powers && (rho >= 1 - 1e-9 || rho * (1 + margin) == 0)) {
    est.lambda = std::max(1.0, rho);
    double log_beta = 0;
    for (int k = 0; k <= k_max; ++k) {
      log_beta = std::max(log_beta, log_norms[k] - k * std::log(est.lambda));
    }
    est.beta = std::exp(log_beta);
    return est;
  }

  est.lambda = rho * (1 + margin);
  if (!(est.lambda > 0)) {
    throw Error(ErrorCode::kNotConverged,
                "spectral radius is zero; use a positive margin");
  }
  std::vector<double> log_ratios(log_norms.size());
  const double log_lambda = std::log(est.lambda);
  for (int k = 0; k <= k_max; ++k) {
    log_ratios[k] = log_norms[k] - k * log_lambda;
  }
  if (!settled(log_ratios)) {
    throw Error(ErrorCode::kNotConverged,
                "|A^k|_1 / lambda^k still growing at k_max = " +
                    std::to_string(k_max) +
                    "; increase k_max or the margin");
  }
  est.beta = std::exp(*std::max_element(log_ratios.begin(), log_ratios.end()));
  return est;
}

bool verify_contraction(const Matrix& a, const ContractionEstimate& est) {
  const std::vector<double> log_norms = log_power_norms(a, est.k_max_checked);
  const double log_beta = std::log(est.beta);
  const double log_lambda = std::log(est.lambda);
  for (int k = 0; k <= est.k_max_checked; ++k) {
    if (log_norms[k] > log_beta + k * log_lambda + 1e-9) return false;
  }
  return true;
}

double static_step_bound(const ContractionEstimate& est, double c_norm1,
                         double zeta, double delta, Horizon horizon) {
  require_estimate(est);
  require_nonnegative(c_norm1, "|C|_1");
  require_nonnegative(zeta, "zeta");
  require_delta(delta, "delta");
  const double scale = est.beta * c_norm1 * zeta / delta;
  if (horizon.is_infinite()) {
    if (!(est.lambda < 1)) {
      throw Error(ErrorCode::kUnsupportedRegime,
                  "infinite-horizon static design needs lambda < 1; use the "
                  "Gaussian input-noise design for unstable plants");
    }
    return scale / (1 - est.lambda);
  }
  double sum = 0;
  for (int t = 0; t <= horizon.last_step(); ++t) {
    sum += scale * std::pow(est.lambda, t);
  }
  return sum;
}

DynamicStepBound dynamic_step_bound(const ContractionEstimate& est,
                                    double c_norm1, double zeta, double delta,
                                    double q, Horizon horizon) {
  require_estimate(est);
  require_nonnegative(c_norm1, "|C|_1");
  require_nonnegative(zeta, "zeta");
  require_delta(delta, "delta");
  if (!(q > 0 && q <= 1)) {
    throw Error(ErrorCode::kValidation, "q must lie in (0, 1]");
  }
  const double scale = est.beta * c_norm1 * zeta / delta;
  DynamicStepBound out;
  if (horizon.is_infinite()) {
    if (est.lambda < q) out.d0_min = scale * q / (q - est.lambda);
    if (est.lambda < 1) out.d_star_min = scale / (1 - est.lambda);
  } else {
    double d0 = 0;
    double d_star = 0;
    for (int t = 0; t <= horizon.last_step(); ++t) {
      d0 += scale * std::pow(est.lambda / q, t);
      d_star += scale * std::pow(est.lambda, t);
    }
    out.d0_min = d0;
    out.d_star_min = d_star;
  }
  if (!out.d0_min && !out.d_star_min) {
    throw Error(ErrorCode::kUnsupportedRegime,
                "infinite-horizon dynamic design needs lambda < 1");
  }
  return out;
}

double privacy_delta_bound(const ContractionEstimate& est, double c_norm1,
                           double zeta, const StepSchedule& schedule, int k) {
  require_estimate(est);
  validate(schedule);
  double sum = 0;
  for (int t = 0; t <= k; ++t) {
    sum += est.beta * c_norm1 * std::pow(est.lambda, t) * zeta /
           step_at(schedule, t);
  }
  return sum;
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double kappa(double epsilon, double s) {
  require_nonnegative(epsilon, "epsilon");
  require_nonnegative(s, "s");
  if (s == 0) return 0;
  const double value = standard_normal_cdf(s / 2 - epsilon / s) -
                       std::exp(epsilon) * standard_normal_cdf(-s / 2 - epsilon / s);
  return std::clamp(value, 0.0, std::nextafter(1.0, 0.0));
}

double kappa_inverse(double epsilon, double delta) {
  require_nonnegative(epsilon, "epsilon");
  require_delta(delta, "delta");
  double lo = 1e-12;
  if (kappa(epsilon, lo) >= delta) return lo;
  double hi = 1;
  while (kappa(epsilon, hi) < delta) {
    hi *= 2;
    if (hi > 1e12) {
      throw Error(ErrorCode::kNotConverged, "kappa_inverse bracket overflow");
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (kappa(epsilon, mid) < delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(kappa(epsilon, lo) - delta) < std::abs(kappa(epsilon, hi) - delta)
             ? lo
             : hi;
}

UnstableDesign design_unstable_mechanism(const LtiPlant& plant,
                                         const ContractionEstimate& est,
                                         double zeta, double epsilon0,
                                         double delta1, double delta2, double q,
                                         std::optional<double> d_star) {
  validate(plant);
  require_estimate(est);
  require_nonnegative(zeta, "zeta");
  require_nonnegative(epsilon0, "epsilon0");
  require_delta(delta1, "delta1");
  require_delta(delta2, "delta2");
  if (!(q > 0 && q <= 1)) {
    throw Error(ErrorCode::kValidation, "q must lie in (0, 1]");
  }

  const ControllabilityData reach = controllability_data(plant);
  if (!markov_zero_check(plant, reach.n_star, 1e-10)) {
    throw Error(ErrorCode::kUnsupportedStructure,
                "C A^k B = 0 must hold for 0 <= k <= n* - 2 (n* = " +
                    std::to_string(reach.n_star) + ")");
  }

  UnstableDesign design;
  design.n_star = reach.n_star;
  design.epsilon0 = epsilon0;
  design.delta1 = delta1;
  design.delta2 = delta2;

  const double c_norm1 = induced_norm_1(plant.c);
  double d0 = 0;
  for (int t = 0; t < reach.n_star; ++t) {
    d0 += est.beta * c_norm1 * std::pow(est.lambda, t) * zeta /
          (delta1 * std::pow(q, t));
  }
  if (q == 1) {
    design.schedule = StepSchedule::fixed(d0);
  } else {
    design.schedule = StepSchedule{d0, d_star.value_or(0.0), q};
  }
  validate(design.schedule);

  design.noise_gain = induced_norm_2(spd_inverse_sqrt(reach.delta) *
                                     matrix_power(plant.a, reach.n_star));
  design.sigma = design.noise_gain * zeta / kappa_inverse(epsilon0, delta2);
  return design;
}

double audit_zero_eps(std::span<const double> y, std::span<const double> y_prime,
                      std::span<const double> steps, double epsilon) {
  require_nonnegative(epsilon, "epsilon");
  if (y.size() != y_prime.size() || steps.empty() ||
      y.size() % steps.size() != 0) {
    throw Error(ErrorCode::kDimension,
                "audit stacks must have equal length, a multiple of the "
                "number of step sizes");
  }
  if (y.size() > static_cast<std::size_t>(kAuditComponentLimit)) {
    throw Error(ErrorCode::kEnumerationLimit,
                "audit enumerates at most " +
                    std::to_string(kAuditComponentLimit) + " components, got " +
                    std::to_string(y.size()));
  }
  const std::size_t per_step = y.size() / steps.size();
  std::vector<TwoPointPmf> first;
  std::vector<TwoPointPmf> second;
  for (std::size_t i = 0; i < y.size(); ++i) {
    first.push_back(output_pmf(y[i], steps[i / per_step]));
    second.push_back(output_pmf(y_prime[i], steps[i / per_step]));
  }

  // Depth-first walk over the atoms of the first law; atoms outside its
  // support contribute nothing to the divergence.
  const double scale = std::exp(epsilon);
  CompensatedSum total;
  const std::size_t m = first.size();
  auto visit = [&](auto&& self, std::size_t i, double p, double p_prime) -> void {
    if (i == m) {
      total.add(std::max(0.0, p - scale * p_prime));
      return;
    }
    for (int bit = 0; bit < 2; ++bit) {
      const std::int64_t index = first[i].lo_index + bit;
      const double pi = first[i].prob_at(index);
      if (pi <= 0) continue;
      self(self, i + 1, p * pi, p_prime * second[i].prob_at(index));
    }
  };
  visit(visit, 0, 1.0, 1.0);
  return total.value();
}

Vector mechanism_mean(const LtiPlant& plant, const Vector& x0,
                      const Vector& input_stack, int k) {
  const Matrix obs = observability_stack(plant, k);
  require_shape(x0, plant.state_dim(), 1, "x0");
  if (input_stack.size() == 0) return obs * x0;
  const Matrix toeplitz = input_toeplitz(plant, k);
  require_shape(input_stack, toeplitz.cols(), 1, "input stack");
  return obs * x0 + toeplitz * input_stack;
}

}  // namespace quantdp
