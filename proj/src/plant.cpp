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

#include <algorithm>
#include <complex>
#include <sstream>
#include <vector>

namespace quantdp {
namespace {

using ComplexMatrix = MatrixX<std::complex<double>>;

Matrix kron(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) =
          lhs(i, j) * rhs;
    }
  }
  return out;
}

// Eigenvalues of A that are not strictly stable, i.e. the modes the PBH
// tests have to examine.
std::vector<std::complex<double>> marginal_modes(const Matrix& a, double tol) {
  std::vector<std::complex<double>> modes;
  const auto values = eigenvalues(a);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) >= 1 - tol) modes.push_back(values(i));
  }
  return modes;
}

}  // namespace

void validate(const LtiPlant& plant) {
  require_square(plant.a, "plant A");
  const auto n = plant.state_dim();
  require_nonempty(plant.b, "plant B");
  require_nonempty(plant.c, "plant C");
  require_nonempty(plant.h_p, "plant H_p");
  require_shape(plant.b, n, plant.b.cols(), "plant B");
  require_shape(plant.c, plant.c.rows(), n, "plant C");
  require_shape(plant.h_p, plant.h_p.rows(), n, "plant H_p");
  require_finite(plant.a, "plant A");
  require_finite(plant.b, "plant B");
  require_finite(plant.c, "plant C");
  require_finite(plant.h_p, "plant H_p");
}

void validate(const LtiPlant& plant, const ExoSystem& exo) {
  validate(plant);
  require_square(exo.a_r, "exo A_r");
  require_nonempty(exo.h_r, "exo H_r");
  require_shape(exo.h_r, plant.tracking_dim(), exo.state_dim(), "exo H_r");
  require_finite(exo.a_r, "exo A_r");
  require_finite(exo.h_r, "exo H_r");
}

void validate(const LtiPlant& plant, const ExoSystem& exo,
              const FusionCenterGains& gains) {
  validate(plant, exo);
  require_shape(gains.l, plant.state_dim(), plant.output_dim(), "gain L");
  require_shape(gains.k_x, plant.input_dim(), plant.state_dim(), "gain K_x");
  require_finite(gains.l, "gain L");
  require_finite(gains.k_x, "gain K_x");
  if (gains.k_r.size() != 0) {
    require_shape(gains.k_r, plant.input_dim(), exo.state_dim(), "gain K_r");
    require_finite(gains.k_r, "gain K_r");
  }
}

AssumptionReport check_assumptions(const LtiPlant& plant, const ExoSystem& exo,
                                   double tol) {
  validate(plant, exo);
  AssumptionReport report;
  std::ostringstream details;
  const auto n = plant.state_dim();

  const auto exo_values = eigenvalues(exo.a_r);
  const double min_modulus = exo_values.cwiseAbs().minCoeff();
  report.a1_exo_modulus_ok = min_modulus >= 1 - tol;
  details << "a1: min |eig(A_r)| = " << min_modulus << "\n";

  const ComplexMatrix a = plant.a.cast<std::complex<double>>();
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  report.a2_stabilizable = true;
  report.a3_detectable = true;
  for (const auto& mode : marginal_modes(plant.a, tol)) {
    ComplexMatrix controllability(n, n + plant.input_dim());
    controllability << mode * identity - a, plant.b.cast<std::complex<double>>();
    if (numerical_rank(controllability, kPbhRankTolerance) < n) {
      report.a2_stabilizable = false;
      details << "a2: uncontrollable mode " << mode << "\n";
    }
    ComplexMatrix observability(n + plant.output_dim(), n);
    observability << mode * identity - a, plant.c.cast<std::complex<double>>();
    if (numerical_rank(observability, kPbhRankTolerance) < n) {
      report.a3_detectable = false;
      details << "a3: unobservable mode " << mode << "\n";
    }
  }

  const auto regulator = regulator_least_squares(plant, exo);
  report.a4_regulator_solvable = regulator.residual <= tol;
  details << "a4: regulator residual = " << regulator.residual << "\n";
  report.details = details.str();
  return report;
}

RegulatorSolution regulator_least_squares(const LtiPlant& plant,
                                          const ExoSystem& exo) {
  validate(plant, exo);
  const auto n1 = plant.state_dim();
  const auto n2 = exo.state_dim();
  const auto m = plant.input_dim();
  const auto q = plant.tracking_dim();
  const Matrix i1 = Matrix::Identity(n1, n1);
  const Matrix i2 = Matrix::Identity(n2, n2);

  // Column-major vec: vec(X A_r) = (A_r^T (x) I) vec X,
  // vec(A X) = (I (x) A) vec X, vec(B U) = (I (x) B) vec U.
  const Eigen::Index unknowns = n1 * n2 + m * n2;
  Matrix system = Matrix::Zero(n1 * n2 + q * n2, unknowns);
  system.block(0, 0, n1 * n2, n1 * n2) =
      kron(exo.a_r.transpose(), i1) - kron(i2, plant.a);
  system.block(0, n1 * n2, n1 * n2, m * n2) = -kron(i2, plant.b);
  system.block(n1 * n2, 0, q * n2, n1 * n2) = kron(i2, plant.h_p);
  Vector rhs = Vector::Zero(system.rows());
  rhs.tail(q * n2) = Eigen::Map<const Vector>(exo.h_r.data(), q * n2);

  const Vector solution =
      Eigen::CompleteOrthogonalDecomposition<Matrix>(system).solve(rhs);

  RegulatorSolution out;
  out.x_mat = Eigen::Map<const Matrix>(solution.data(), n1, n2);
  out.u_mat = Eigen::Map<const Matrix>(solution.data() + n1 * n2, m, n2);
  const double dynamic_defect =
      (out.x_mat * exo.a_r - plant.a * out.x_mat - plant.b * out.u_mat)
          .cwiseAbs()
          .maxCoeff();
  const double output_defect =
      (plant.h_p * out.x_mat - exo.h_r).cwiseAbs().maxCoeff();
  out.residual = std::max(dynamic_defect, output_defect);
  return out;
}

RegulatorSolution solve_regulator_equations(const LtiPlant& plant,
                                            const ExoSystem& exo) {
  auto solution = regulator_least_squares(plant, exo);
  if (!(solution.residual <= kRegulatorConsistencyTolerance)) {
    throw InfeasibleError(solution.residual,
                          "regulator equations inconsistent, residual " +
                              std::to_string(solution.residual));
  }
  return solution;
}

Matrix gain_kr(const Matrix& k_x, const RegulatorSolution& sol) {
  require_shape(k_x, sol.u_mat.rows(), sol.x_mat.rows(), "gain K_x");
  return sol.u_mat - k_x * sol.x_mat;
}

Matrix closed_loop_matrix(const LtiPlant& plant,
                          const FusionCenterGains& gains) {
  validate(plant);
  const auto n = plant.state_dim();
  require_shape(gains.l, n, plant.output_dim(), "gain L");
  require_shape(gains.k_x, plant.input_dim(), n, "gain K_x");
  const Matrix lc = gains.l * plant.c;
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = plant.a + plant.b * gains.k_x;
  out.topRightCorner(n, n) = lc;
  out.bottomRightCorner(n, n) = plant.a + lc;
  return out;
}

Matrix observability_stack(const LtiPlant& plant, int k) {
  validate(plant);
  if (k < 0) throw Error(ErrorCode::kValidation, "horizon must be >= 0");
  const auto p = plant.output_dim();
  Matrix out(p * (k + 1), plant.state_dim());
  Matrix block = plant.c;
  for (int t = 0; t <= k; ++t) {
    out.middleRows(t * p, p) = block;
    block = block * plant.a;
  }
  return out;
}

Matrix input_toeplitz(const LtiPlant& plant, int k) {
  validate(plant);
  if (k < 0) throw Error(ErrorCode::kValidation, "horizon must be >= 0");
  const auto p = plant.output_dim();
  const auto m = plant.input_dim();
  // markov[t] = C A^t B.
  std::vector<Matrix> markov;
  Matrix ab = plant.b;
  for (int t = 0; t < k; ++t) {
    markov.push_back(plant.c * ab);
    ab = plant.a * ab;
  }
  Matrix out = Matrix::Zero(p * (k + 1), m * (k + 1));
  for (int i = 1; i <= k; ++i) {
    for (int j = 0; j < i; ++j) {
      out.block(i * p, j * m, p, m) = markov[i - j - 1];
    }
  }
  return out;
}

ControllabilityData controllability_data(const LtiPlant& plant) {
  validate(plant);
  const auto n = plant.state_dim();
  const auto m = plant.input_dim();
  // Blocks are prepended: [A^{s-1} B, ..., B].
  Matrix reach = plant.b;
  Matrix power_b = plant.b;
  for (int n_star = 1; n_star <= n; ++n_star) {
    if (n_star > 1) {
      power_b = plant.a * power_b;
      Matrix grown(n, m * n_star);
      grown << power_b, reach;
      reach = std::move(grown);
    }
    Matrix delta = reach * reach.transpose();
    const auto sv = singular_values(delta);
    if (sv(0) > 0 && sv(sv.size() - 1) > 1e-10 * sv(0)) {
      return ControllabilityData{n_star, reach, std::move(delta)};
    }
  }
  throw Error(ErrorCode::kUncontrollable, "(A, B) is not controllable");
}

bool markov_zero_check(const LtiPlant& plant, int n_star, double tol) {
  validate(plant);
  Matrix ab = plant.b;
  for (int k = 0; k <= n_star - 2; ++k) {
    if ((plant.c * ab).cwiseAbs().maxCoeff() > tol) return false;
    ab = plant.a * ab;
  }
  return true;
}

}  // namespace quantdp
