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

#include "quantdp/quantizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quantdp/error.hpp"

namespace quantdp {
namespace {

constexpr double kGridSnap = 1e-12;

void require_step(double d) {
  if (!(d > 0) || !std::isfinite(d)) {
    throw Error(ErrorCode::kValidation,
                "quantization step must be positive, got " + std::to_string(d));
  }
}

}  // namespace

void validate(const StepSchedule& schedule) {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kValidation, "step schedule: " + what);
  };
  if (!(schedule.d0 > 0) || !std::isfinite(schedule.d0)) fail("d0 must be > 0");
  if (!(schedule.d_star >= 0) || schedule.d_star > schedule.d0) {
    fail("need 0 <= d_star <= d0");
  }
  if (!(schedule.q > 0) || schedule.q > 1) fail("q must lie in (0, 1]");
  if (schedule.q == 1 && schedule.d_star != schedule.d0) {
    fail("q = 1 requires d_star = d0");
  }
}

double step_at(const StepSchedule& schedule, long k) {
  if (schedule.q == 1 || k == 0) return schedule.d0;
  return schedule.d_star +
         (schedule.d0 - schedule.d_star) * std::pow(schedule.q, double(k));
}

double quantize_deterministic(double y, double d) {
  require_step(d);
  // Adding 0.0 turns a -0 cell into +0.
  return std::ceil(y / d - 0.5) * d + 0.0;
}

TwoPointPmf output_pmf(double y, double d) {
  require_step(d);
  const double ratio = y / d;
  const double nearest = std::round(ratio);
  TwoPointPmf pmf;
  if (std::abs(ratio - nearest) <= kGridSnap * std::max(1.0, std::abs(ratio))) {
    pmf.lo_index = static_cast<std::int64_t>(nearest) - 1;
    pmf.p_hi = 1;
  } else {
    pmf.lo_index = static_cast<std::int64_t>(std::ceil(ratio)) - 1;
    const double z = y - double(pmf.lo_index) * d;
    pmf.p_hi = std::clamp(z / d, 0.0, 1.0);
  }
  pmf.lo_value = double(pmf.lo_index) * d;
  pmf.hi_value = double(pmf.lo_index + 1) * d;
  return pmf;
}

double total_variation(const TwoPointPmf& lhs, const TwoPointPmf& rhs) {
  const std::int64_t first = std::min(lhs.lo_index, rhs.lo_index);
  const std::int64_t last = std::max(lhs.lo_index, rhs.lo_index) + 1;
  double sum = 0;
  for (std::int64_t i = first; i <= last; ++i) {
    sum += std::abs(lhs.prob_at(i) - rhs.prob_at(i));
  }
  return sum / 2;
}

}  // namespace quantdp
