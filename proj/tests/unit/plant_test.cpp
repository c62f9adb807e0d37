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

#include "quantdp/plant.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"

namespace quantdp {
namespace {

ExoSystem scalar_exo(double a_r, double h_r = 1) {
  return ExoSystem{Matrix::Constant(1, 1, a_r), Matrix::Constant(1, 1, h_r)};
}

TEST(CheckAssumptions, VehicleSatisfiesAll) {
  const AssumptionReport report =
      check_assumptions(fixture::vehicle_plant(), fixture::vehicle_exo());
  EXPECT_TRUE(report.a1_exo_modulus_ok);
  EXPECT_TRUE(report.a2_stabilizable);
  EXPECT_TRUE(report.a3_detectable);
  EXPECT_TRUE(report.a4_regulator_solvable);
}

TEST(CheckAssumptions, ZeroExoEigenvalueFailsA1Only) {
  const AssumptionReport report =
      check_assumptions(fixture::scalar_plant(-1, 0.2), scalar_exo(0));
  EXPECT_FALSE(report.a1_exo_modulus_ok);
  EXPECT_TRUE(report.a2_stabilizable);
  EXPECT_TRUE(report.a3_detectable);
  EXPECT_TRUE(report.a4_regulator_solvable);
  EXPECT_FALSE(report.all_hold());
}

TEST(CheckAssumptions, UnactuatedUnstableModeIsNotStabilizable) {
  const AssumptionReport report =
      check_assumptions(fixture::scalar_plant(2, 0), scalar_exo(1));
  EXPECT_FALSE(report.a2_stabilizable);
}

TEST(CheckAssumptions, UnobservedUnstableModeIsNotDetectable) {
  const AssumptionReport report =
      check_assumptions(fixture::scalar_plant(2, 1, 0), scalar_exo(1));
  EXPECT_FALSE(report.a3_detectable);
}

TEST(CheckAssumptions, IsPure) {
  const auto first = check_assumptions(fixture::vehicle_plant(), fixture::vehicle_exo());
  const auto second = check_assumptions(fixture::vehicle_plant(), fixture::vehicle_exo());
  EXPECT_EQ(first.details, second.details);
  EXPECT_EQ(first.all_hold(), second.all_hold());
}

TEST(Regulator, VehicleSolution) {
  const RegulatorSolution sol =
      solve_regulator_equations(fixture::vehicle_plant(), fixture::vehicle_exo());
  Matrix expected_x = Matrix::Zero(4, 2);
  expected_x.topRows(2) = Matrix::Identity(2, 2);
  EXPECT_LE((sol.x_mat - expected_x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(sol.u_mat.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(sol.residual, 1e-12);
}

TEST(Regulator, ZeroReferenceGivesZeroSolution) {
  const ExoSystem exo{Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  const RegulatorSolution sol = solve_regulator_equations(fixture::vehicle_plant(), exo);
  EXPECT_LE(sol.x_mat.cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(sol.u_mat.cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(sol.residual, 0.0);
}

TEST(Regulator, ScalarExample) {
  const RegulatorSolution sol =
      solve_regulator_equations(fixture::scalar_plant(-1, 0.2), scalar_exo(0));
  EXPECT_NEAR(sol.x_mat(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(sol.u_mat(0, 0), 5.0, 1e-12);
}

TEST(Regulator, InconsistentSystemReportsResidual) {
  // Nothing moves the output, yet it must track a constant reference.
  const LtiPlant p = fixture::scalar_plant(0.5, 0);
  EXPECT_GT(regulator_least_squares(p, scalar_exo(1)).residual, 1e-3);
  try {
    solve_regulator_equations(fixture::scalar_plant(0.5, 0), scalar_exo(1));
    FAIL() << "expected an error";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    EXPECT_GT(e.residual(), 1e-8);
  }
}

TEST(RegulatorProperty, DeclaredSolutionsSatisfyBothEquations) {
  std::mt19937_64 rng(17);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LtiPlant p{fixture::random_matrix(rng, 3, 3), fixture::random_matrix(rng, 3, 2),
               fixture::random_matrix(rng, 2, 3), fixture::random_matrix(rng, 2, 3)};
    ExoSystem exo{fixture::random_with_radius(rng, 2, 1.0),
                  fixture::random_matrix(rng, 2, 2)};
    const RegulatorSolution sol = regulator_least_squares(p, exo);
    if (sol.residual > kRegulatorConsistencyTolerance) continue;
    ++solved;
    const double d1 =
        (sol.x_mat * exo.a_r - p.a * sol.x_mat - p.b * sol.u_mat).cwiseAbs().maxCoeff();
    const double d2 = (p.h_p * sol.x_mat - exo.h_r).cwiseAbs().maxCoeff();
    ASSERT_LE(std::max(d1, d2), 1e-10);
  }
  EXPECT_GT(solved, 100);
}

TEST(GainKr, Examples) {
  const RegulatorSolution vehicle =
      solve_regulator_equations(fixture::vehicle_plant(), fixture::vehicle_exo());
  EXPECT_LE((gain_kr(fixture::vehicle_gains().k_x, vehicle) - Matrix::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  EXPECT_EQ(gain_kr(Matrix::Zero(2, 4), vehicle), vehicle.u_mat);
  const RegulatorSolution scalar =
      solve_regulator_equations(fixture::scalar_plant(-1, 0.2), scalar_exo(0));
  EXPECT_NEAR(gain_kr(Matrix::Constant(1, 1, 1.0), scalar)(0, 0), 4.0, 1e-12);
}

TEST(ClosedLoopMatrix, Examples) {
  const LtiPlant p = fixture::vehicle_plant();
  FusionCenterGains zero{Matrix::Zero(4, 2), Matrix::Zero(2, 4), Matrix()};
  LtiPlant unactuated = p;
  unactuated.b.setZero();
  Matrix block = Matrix::Zero(8, 8);
  block.topLeftCorner(4, 4) = p.a;
  block.bottomRightCorner(4, 4) = p.a;
  EXPECT_EQ(closed_loop_matrix(unactuated, zero), block);

  const Matrix f = closed_loop_matrix(p, fixture::vehicle_gains());
  EXPECT_EQ(f.rows(), 8);
  EXPECT_TRUE(is_schur_stable(f));

  FusionCenterGains scalar{Matrix::Constant(1, 1, -1), Matrix::Constant(1, 1, 1),
                           Matrix::Constant(1, 1, 0)};
  const Matrix g = closed_loop_matrix(fixture::scalar_plant(-1, 0.2), scalar);
  EXPECT_TRUE(g.isApprox(Matrix{{-0.8, -1}, {0, -2}}, 1e-15));
  EXPECT_FALSE(is_schur_stable(g));
}

TEST(ObservabilityStack, Examples) {
  const LtiPlant vehicle = fixture::vehicle_plant();
  EXPECT_EQ(observability_stack(vehicle, 0), vehicle.c);
  Matrix expected(4, 4);
  expected << vehicle.c, Matrix{{1, 0, 0.1, 0}, {0, 1, 0, 0.1}};
  EXPECT_TRUE(observability_stack(vehicle, 1).isApprox(expected));
  EXPECT_EQ(observability_stack(fixture::scalar_plant(-1, 0.2), 2),
            (Matrix{{1}, {-1}, {1}}));
}

TEST(InputToeplitz, Examples) {
  const LtiPlant vehicle = fixture::vehicle_plant();
  EXPECT_EQ(input_toeplitz(vehicle, 0), Matrix::Zero(2, 2));
  EXPECT_EQ(input_toeplitz(vehicle, 1), Matrix::Zero(4, 4));
  EXPECT_TRUE(input_toeplitz(fixture::scalar_plant(-1, 0.2), 2)
                  .isApprox(Matrix{{0, 0, 0}, {0.2, 0, 0}, {-0.2, 0.2, 0}}, 1e-15));
}

TEST(MechanismProperty, StacksMatchStepwiseSimulation) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const LtiPlant p{fixture::random_with_radius(rng, 3, 1.1),
                     fixture::random_matrix(rng, 3, 2), fixture::random_matrix(rng, 2, 3),
                     fixture::random_matrix(rng, 1, 3)};
    const int k = trial % 6;
    const Vector x0 = fixture::random_matrix(rng, 3, 1);
    const Vector u = fixture::random_matrix(rng, 2 * (k + 1), 1);
    Vector stepwise(2 * (k + 1));
    Vector x = x0;
    for (int t = 0; t <= k; ++t) {
      stepwise.segment(2 * t, 2) = p.c * x;
      x = p.a * x + p.b * u.segment(2 * t, 2);
    }
    const Vector stacked = observability_stack(p, k) * x0 + input_toeplitz(p, k) * u;
    ASSERT_LE((stacked - stepwise).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ControllabilityData, Vehicle) {
  const ControllabilityData data = controllability_data(fixture::vehicle_plant());
  EXPECT_EQ(data.n_star, 2);
  EXPECT_EQ(data.m_mat.cols(), 4);
  EXPECT_LE((data.delta - Matrix(Vector{{0.01, 0.01, 1, 1}}.asDiagonal()))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(ControllabilityData, ScalarAndUncontrollable) {
  const ControllabilityData scalar = controllability_data(fixture::scalar_plant(3, 0.2));
  EXPECT_EQ(scalar.n_star, 1);
  EXPECT_NEAR(scalar.delta(0, 0), 0.04, 1e-15);
  try {
    controllability_data(fixture::scalar_plant(3, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUncontrollable);
  }
}

TEST(ControllabilityProperty, NStarIsMinimal) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    LtiPlant p{fixture::random_matrix(rng, 4, 4), fixture::random_matrix(rng, 4, 1),
               fixture::random_matrix(rng, 1, 4), fixture::random_matrix(rng, 1, 4)};
    const ControllabilityData data = controllability_data(p);
    if (data.n_star == 1) continue;
    Matrix shorter(4, data.n_star - 1);
    for (int j = 0; j < data.n_star - 1; ++j) {
      shorter.col(j) = matrix_power(p.a, j) * p.b;
    }
    EXPECT_LT(numerical_rank(Matrix(shorter * shorter.transpose()), 1e-10), 4);
  }
}

TEST(MarkovZeroCheck, Examples) {
  EXPECT_TRUE(markov_zero_check(fixture::vehicle_plant(), 2));
  EXPECT_TRUE(markov_zero_check(fixture::scalar_plant(1, 1), 1));
  EXPECT_FALSE(markov_zero_check(fixture::scalar_plant(1, 1), 2));
}

TEST(Validate, DimensionMismatchIsRejected) {
  LtiPlant p = fixture::vehicle_plant();
  p.b = Matrix::Zero(3, 2);
  try {
    validate(p);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
}

}  // namespace
}  // namespace quantdp
