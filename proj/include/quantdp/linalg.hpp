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

#ifndef QUANTDP_LINALG_HPP_
#define QUANTDP_LINALG_HPP_

// Small dense linear algebra on Eigen types: induced norms, spectral radius,
// Schur stability, discrete Lyapunov equations and SPD inverse square roots.
// Every function accepts any Eigen expression and is templated on the scalar.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "quantdp/error.hpp"

namespace quantdp {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

template <typename Derived>
void require_nonempty(const Eigen::MatrixBase<Derived>& m,
                      std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw Error(ErrorCode::kDimension, std::string(what) + " is empty");
  }
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, std::string_view what) {
  require_nonempty(m, what);
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimension,
                std::string(what) + " must be square, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kValidation,
                std::string(what) + " has non-finite entries");
  }
}

template <typename Derived>
void require_shape(const Eigen::MatrixBase<Derived>& m, Eigen::Index rows,
                   Eigen::Index cols, std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kDimension,
                std::string(what) + " must be " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
}

/// Max column absolute sum.
template <typename Derived>
typename Derived::RealScalar induced_norm_1(
    const Eigen::MatrixBase<Derived>& m) {
  require_nonempty(m, "matrix");
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// Max row absolute sum.
template <typename Derived>
typename Derived::RealScalar induced_norm_inf(
    const Eigen::MatrixBase<Derived>& m) {
  require_nonempty(m, "matrix");
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Largest singular value.
template <typename Derived>
typename Derived::RealScalar induced_norm_2(
    const Eigen::MatrixBase<Derived>& m) {
  require_nonempty(m, "matrix");
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(m.eval());
  return svd.singularValues()(0);
}

/// Singular values in decreasing order.
template <typename Derived>
VectorX<typename Derived::RealScalar> singular_values(
    const Eigen::MatrixBase<Derived>& m) {
  require_nonempty(m, "matrix");
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(m.eval());
  return svd.singularValues();
}

template <typename Derived>
VectorX<std::complex<typename Derived::RealScalar>> eigenvalues(
    const Eigen::MatrixBase<Derived>& m) {
  require_square(m, "matrix");
  using Scalar = typename Derived::Scalar;
  Eigen::EigenSolver<MatrixX<Scalar>> solver(m.eval(),
                                             /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotConverged, "eigenvalue iteration failed");
  }
  return solver.eigenvalues();
}

template <typename Derived>
typename Derived::RealScalar spectral_radius(
    const Eigen::MatrixBase<Derived>& m) {
  return eigenvalues(m).cwiseAbs().maxCoeff();
}

/// True iff every eigenvalue lies strictly inside the circle of radius 1 - tol.
template <typename Derived>
bool is_schur_stable(const Eigen::MatrixBase<Derived>& m,
                     typename Derived::RealScalar tol = 0) {
  return spectral_radius(m) < 1 - tol;
}

/// Rank by singular-value threshold: sigma_i > rel_tol * sigma_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m,
                            typename Derived::RealScalar rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const auto sv = singular_values(m);
  if (sv(0) == 0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

template <typename Derived>
MatrixX<typename Derived::Scalar> matrix_power(
    const Eigen::MatrixBase<Derived>& m, int exponent) {
  require_square(m, "matrix");
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> result = MatrixX<Scalar>::Identity(m.rows(), m.cols());
  MatrixX<Scalar> base = m;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

// Solves Z = F Z F^T + W through the vectorized system
// (I - F (x) F) vec(Z) = vec(W), followed by one step of iterative
// refinement. Sized for n up to a few tens.
template <typename DerivedF, typename DerivedW>
MatrixX<typename DerivedF::Scalar> solve_discrete_lyapunov(
    const Eigen::MatrixBase<DerivedF>& f, const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedF::Scalar;
  using Real = typename DerivedF::RealScalar;
  require_square(f, "Lyapunov dynamics matrix");
  require_shape(w, f.rows(), f.cols(), "Lyapunov forcing matrix");
  require_finite(f, "Lyapunov dynamics matrix");
  require_finite(w, "Lyapunov forcing matrix");
  const Real w_scale = std::max<Real>(1, w.cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > Real(1e-12) * w_scale) {
    throw Error(ErrorCode::kValidation, "Lyapunov forcing matrix not symmetric");
  }
  if (!is_schur_stable(f, Real(0))) {
    throw Error(ErrorCode::kInstability,
                "Lyapunov dynamics matrix is not Schur stable (spectral radius " +
                    std::to_string(double(spectral_radius(f))) + ")");
  }

  const Eigen::Index n = f.rows();
  const Eigen::Index nn = n * n;
  const MatrixX<Scalar> fm = f;
  // Column-major vec: vec(F Z F^T) = (F (x) F) vec(Z).
  MatrixX<Scalar> system = MatrixX<Scalar>::Identity(nn, nn);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      system.block(i * n, j * n, n, n) -= fm(i, j) * fm;
    }
  }
  const MatrixX<Scalar> wm = w;
  const VectorX<Scalar> rhs = Eigen::Map<const VectorX<Scalar>>(wm.data(), nn);
  Eigen::FullPivLU<MatrixX<Scalar>> lu(system);
  VectorX<Scalar> vec_z = lu.solve(rhs);
  vec_z += lu.solve(rhs - system * vec_z);

  MatrixX<Scalar> z = Eigen::Map<const MatrixX<Scalar>>(vec_z.data(), n, n);
  z = (z + z.transpose()).eval() / Scalar(2);
  return z;
}

/// Max entrywise defect of Z - F Z F^T - W.
template <typename DerivedF, typename DerivedZ, typename DerivedW>
typename DerivedF::RealScalar lyapunov_residual(
    const Eigen::MatrixBase<DerivedF>& f, const Eigen::MatrixBase<DerivedZ>& z,
    const Eigen::MatrixBase<DerivedW>& w) {
  return (z - f * z * f.transpose() - w).cwiseAbs().maxCoeff();
}

// Returns R = S^{-1/2}, the symmetric positive definite square root of the
// inverse. Throws kSingular when the smallest eigenvalue is not resolvably
// positive.
template <typename Derived>
MatrixX<typename Derived::Scalar> spd_inverse_sqrt(
    const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  require_square(s, "SPD matrix");
  require_finite(s, "SPD matrix");
  const Real scale = std::max<Real>(1, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > Real(1e-12) * scale) {
    throw Error(ErrorCode::kSingular, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(s.eval());
  const auto& values = eig.eigenvalues();
  const Real largest = values.cwiseAbs().maxCoeff();
  if (!(values.minCoeff() > Real(1e-12) * largest)) {
    throw Error(ErrorCode::kSingular,
                "matrix is not positive definite (smallest eigenvalue " +
                    std::to_string(double(values.minCoeff())) + ")");
  }
  const VectorX<Scalar> inv_sqrt = values.cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace quantdp

#endif  // QUANTDP_LINALG_HPP_
