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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "quantdp/random.hpp"
#include "support/oracles.hpp"

namespace quantdp {
namespace {

TEST(StepAt, Examples) {
  const StepSchedule zoom{10, 0, 0.99};
  EXPECT_EQ(step_at(zoom, 0), 10.0);
  EXPECT_NEAR(step_at(zoom, 1), 9.9, 1e-14);
  for (long k : {0L, 1L, 7L, 100000L}) EXPECT_EQ(step_at(StepSchedule::fixed(4), k), 4.0);
}

TEST(StepSchedule, InvalidSchedulesAreRejected) {
  EXPECT_THROW(validate(StepSchedule{0, 0, 1}), Error);
  EXPECT_THROW(validate(StepSchedule{1, 2, 0.5}), Error);
  EXPECT_THROW(validate(StepSchedule{1, 0.5, 1}), Error);
  EXPECT_THROW(validate(StepSchedule{1, 0, 1.5}), Error);
  EXPECT_THROW(validate(StepSchedule{1, 0, 0}), Error);
  EXPECT_NO_THROW(validate(StepSchedule{10, 0, 0.99}));
}

TEST(StepScheduleProperty, MonotoneAndWithinEnvelope) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double d0 = 0.1 + 10 * unit(rng);
    const StepSchedule s{d0, d0 * unit(rng), 0.5 + 0.5 * unit(rng)};
    EXPECT_EQ(step_at(s, 0), s.d0);
    double previous = step_at(s, 0);
    for (long k = 1; k <= 10000; ++k) {
      const double d = step_at(s, k);
      ASSERT_LE(d, previous);
      const double excess = d - s.d_star;
      ASSERT_GE(excess, (s.d0 - s.d_star) * std::pow(s.q, double(k)) - 1e-12 * s.d0);
      ASSERT_LE(excess, (s.d0 - s.d_star) * (1 + 1e-12));
      previous = d;
    }
    EXPECT_NEAR(step_at(s, 100000), s.d_star, 1e-9 * s.d0);
  }
}

TEST(QuantizeDeterministic, Examples) {
  EXPECT_EQ(quantize_deterministic(0.8, 2), 0.0);
  EXPECT_EQ(quantize_deterministic(1.0, 2), 0.0);
  EXPECT_EQ(quantize_deterministic(1.2, 2), 2.0);
  EXPECT_EQ(quantize_deterministic(-1.0, 2), -2.0);
  EXPECT_EQ(quantize_deterministic(-0.8, 2), 0.0);
}

TEST(OutputPmf, Examples) {
  const TwoPointPmf a = output_pmf(0.5, 2);
  EXPECT_EQ(a.lo_value, 0.0);
  EXPECT_EQ(a.hi_value, 2.0);
  EXPECT_DOUBLE_EQ(a.p_lo(), 0.75);
  EXPECT_DOUBLE_EQ(a.p_hi, 0.25);

  const TwoPointPmf b = output_pmf(2.0, 2);
  EXPECT_EQ(b.hi_value, 2.0);
  EXPECT_EQ(b.p_hi, 1.0);

  const TwoPointPmf c = output_pmf(0.1, 2);
  EXPECT_EQ(c.lo_value, 0.0);
  EXPECT_NEAR(c.p_lo(), 0.95, 1e-15);
  EXPECT_NEAR(c.p_hi, 0.05, 1e-15);
}

TEST(OutputPmf, NearGridValuesSnap) {
  const TwoPointPmf pmf = output_pmf(0.3 * 3, 0.3);  // 0.8999999999999999
  EXPECT_GE(pmf.p_lo(), 0.0);
  EXPECT_NEAR(pmf.mean(), 0.9, 1e-12);
}

TEST(OutputPmfProperty, UnbiasedWithExactVariance) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> y_dist(-100, 100);
  std::uniform_real_distribution<double> d_dist(1e-3, 10);
  for (int trial = 0; trial < 100000; ++trial) {
    const double y = y_dist(rng);
    const double d = d_dist(rng);
    const TwoPointPmf pmf = output_pmf(y, d);
    ASSERT_NEAR(pmf.hi_value - pmf.lo_value, d, 1e-12 * std::max(1.0, std::abs(y)));
    ASSERT_GE(pmf.p_hi, 0.0);
    ASSERT_LE(pmf.p_hi, 1.0);
    ASSERT_NEAR(pmf.mean(), y, 1e-12 * std::max(1.0, std::abs(y)));
    const double z = y - pmf.lo_value;
    ASSERT_NEAR(pmf.variance(), z * (d - z), 1e-9 * d * d);
    ASSERT_LE(pmf.variance(), d * d / 4 * (1 + 1e-12));
  }
}

TEST(OutputPmfProperty, AgreesWithDefinition) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> y_dist(-10, 10);
  for (int trial = 0; trial < 10000; ++trial) {
    const double y = y_dist(rng);
    const double d = 0.5 + trial % 5;
    const TwoPointPmf pmf = output_pmf(y, d);
    for (const oracle::Atom& atom : oracle::quantizer_law(y, d)) {
      ASSERT_NEAR(pmf.prob_at(atom.index), atom.prob, 1e-12);
    }
  }
}

TEST(TotalVariationProperty, ContractionBound) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int cross_cell = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const double d = 0.1 + 5 * unit(rng);
    const double y = 20 * (unit(rng) - 0.5);
    const double y_prime = y + d * (2 * unit(rng) - 1);
    const TwoPointPmf p = output_pmf(y, d);
    const TwoPointPmf p_prime = output_pmf(y_prime, d);
    if (p.lo_index != p_prime.lo_index) ++cross_cell;
    ASSERT_LE(total_variation(p, p_prime), std::abs(y - y_prime) / d + 1e-12);
  }
  EXPECT_GT(cross_cell, 1000);
}

TEST(TotalVariation, TightForPairAtGridPoint) {
  for (double s : {0.0, 0.1, 0.7, 1.3, 2.0}) {
    EXPECT_NEAR(total_variation(output_pmf(0, 2), output_pmf(s, 2)), s / 2, 1e-12);
  }
}

TEST(QuantizeStochastic, EmpiricalMeanAndSupport) {
  Substream rng(1, StreamPurpose::kAuxiliary, 0, 0, 0);
  const int n = 1000000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double v = quantize_stochastic(0.5, 2, rng);
    ASSERT_TRUE(v == 0.0 || v == 2.0);
    sum += v;
  }
  EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(0.75) / 1e3);
}

TEST(QuantizeStochastic, GridAlignedIsDeterministic) {
  Substream rng(2, StreamPurpose::kAuxiliary, 0, 0, 0);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(quantize_stochastic(2.0, 2, rng), 2.0);
}

TEST(QuantizeVector, JointLawIsProduct) {
  Substream rng(3, StreamPurpose::kAuxiliary, 0, 0, 0);
  std::map<std::pair<double, double>, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vector v = quantize_vector(Vector{{0.5, 0.5}}, 2, rng);
    ++counts[{v(0), v(1)}];
  }
  const std::map<std::pair<double, double>, double> expected{
      {{0, 0}, 0.5625}, {{0, 2}, 0.1875}, {{2, 0}, 0.1875}, {{2, 2}, 0.0625}};
  ASSERT_EQ(counts.size(), 4u);
  // Chi-square independence test on the 2x2 table, 1 degree of freedom.
  double row[2] = {0, 0};
  double col[2] = {0, 0};
  for (const auto& [key, count] : counts) {
    row[key.first > 0] += count;
    col[key.second > 0] += count;
    const double p = expected.at(key);
    EXPECT_NEAR(double(count) / n, p, 5 * std::sqrt(p * (1 - p) / n));
  }
  double chi2 = 0;
  for (const auto& [key, count] : counts) {
    const double e = row[key.first > 0] * col[key.second > 0] / n;
    chi2 += (count - e) * (count - e) / e;
  }
  EXPECT_LT(chi2, 10.828);  // 0.999 quantile
}

TEST(QuantizeVector, GridAlignedVectorPassesThrough) {
  Substream rng(4, StreamPurpose::kAuxiliary, 0, 0, 0);
  const Vector y{{-4.0, 0.0, 6.0}};
  EXPECT_EQ(quantize_vector(y, 2, rng), y);
}

TEST(DeterminismBridge, ErrorsShrinkWithStep) {
  for (double y : {0.37, -1.91, 12.5}) {
    for (double d = 1; d > 1e-6; d /= 3) {
      EXPECT_LE(std::abs(quantize_deterministic(y, d) - y), d / 2 + 1e-15 * std::abs(y));
      EXPECT_NEAR(output_pmf(y, d).mean(), y, 1e-12);
    }
  }
}

TEST(Substream, IsCounterBased) {
  Substream a(9, StreamPurpose::kQuantizer, 3, 4, 5);
  Substream b(9, StreamPurpose::kQuantizer, 3, 4, 5);
  Substream c(9, StreamPurpose::kQuantizer, 3, 4, 6);
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    EXPECT_EQ(va, b());
    EXPECT_NE(va, c());
  }
}

}  // namespace
}  // namespace quantdp
