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

#ifndef QUANTDP_PLANT_HPP_
#define QUANTDP_PLANT_HPP_

#include <string>

#include "quantdp/linalg.hpp"

namespace quantdp {

// x(k+1) = A x(k) + B u(k),  y = C x,  y_p = H_p x.
struct LtiPlant {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix h_p;

  Eigen::Index state_dim() const { return a.rows(); }
  Eigen::Index input_dim() const { return b.cols(); }
  Eigen::Index output_dim() const { return c.rows(); }
  Eigen::Index tracking_dim() const { return h_p.rows(); }
};

// Reference generator x_r(k+1) = A_r x_r(k), y_r = H_r x_r.
struct ExoSystem {
  Matrix a_r;
  Matrix h_r;

  Eigen::Index state_dim() const { return a_r.rows(); }
};

// Observer-based tracking controller
//   x_hat(k+1) = A x_hat + B u + L (C x_hat - v),  u = K_x x_hat + K_r x_r.
struct FusionCenterGains {
  Matrix l;
  Matrix k_x;
  Matrix k_r;
};

struct RegulatorSolution {
  Matrix x_mat;
  Matrix u_mat;
  double residual = 0;
};

struct AssumptionReport {
  bool a1_exo_modulus_ok = false;
  bool a2_stabilizable = false;
  bool a3_detectable = false;
  bool a4_regulator_solvable = false;
  std::string details;

  bool all_hold() const {
    return a1_exo_modulus_ok && a2_stabilizable && a3_detectable &&
           a4_regulator_solvable;
  }
};

struct ControllabilityData {
  int n_star = 0;
  Matrix m_mat;  // [A^{n*-1} B, ..., A B, B]
  Matrix delta;  // m_mat * m_mat^T
};

// Dimension and finiteness validation; throw Error(kDimension/kValidation).
void validate(const LtiPlant& plant);
void validate(const LtiPlant& plant, const ExoSystem& exo);
// k_r is validated only when non-empty.
void validate(const LtiPlant& plant, const ExoSystem& exo,
              const FusionCenterGains& gains);

// PBH rank threshold: a singular value counts when above this times the largest.
inline constexpr double kPbhRankTolerance = 1e-8;
inline constexpr double kRegulatorConsistencyTolerance = 1e-8;

// Checks the four standing assumptions of the tracking problem: exo-system
// eigenvalues on or outside the unit circle, stabilizability of (A, B),
// detectability of (C, A) and solvability of the regulator equations.
// Never throws on a failing assumption; the report records which one failed.
AssumptionReport check_assumptions(const LtiPlant& plant, const ExoSystem& exo,
                                   double tol = 1e-9);

// Minimum-norm least-squares solution of
//   X A_r = A X + B U,   H_p X = H_r
// with the residual filled in; never throws on inconsistency.
RegulatorSolution regulator_least_squares(const LtiPlant& plant,
                                          const ExoSystem& exo);

// As regulator_least_squares, but throws InfeasibleError when the residual
// exceeds kRegulatorConsistencyTolerance.
RegulatorSolution solve_regulator_equations(const LtiPlant& plant,
                                            const ExoSystem& exo);

/// K_r = U - K_x X.
Matrix gain_kr(const Matrix& k_x, const RegulatorSolution& sol);

// [A + B K_x, L C; 0, A + L C], the joint dynamics of (x_hat - X x_r, x_hat - x).
Matrix closed_loop_matrix(const LtiPlant& plant, const FusionCenterGains& gains);

/// Stack of C A^t for t = 0..k.
Matrix observability_stack(const LtiPlant& plant, int k);

// Block lower-triangular map from the input stack [u(0); ...; u(k)] to the
// output stack, with block (i, j) = C A^{i-j-1} B for i > j.
Matrix input_toeplitz(const LtiPlant& plant, int k);

// Smallest n* for which M M^T is nonsingular. Throws kUncontrollable when no
// n* <= n exists.
ControllabilityData controllability_data(const LtiPlant& plant);

/// True iff max|C A^k B| <= tol for all 0 <= k <= n_star - 2.
bool markov_zero_check(const LtiPlant& plant, int n_star, double tol = 1e-12);

}  // namespace quantdp

#endif  // QUANTDP_PLANT_HPP_
