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

// Hand-entered systems shared by several suites.

#ifndef QUANTDP_TESTS_SUPPORT_FIXTURES_HPP_
#define QUANTDP_TESTS_SUPPORT_FIXTURES_HPP_

#include <random>

#include "quantdp/linalg.hpp"
#include "quantdp/plant.hpp"

namespace quantdp::fixture {

// Two decoupled double integrators, sampling time 0.1.
inline LtiPlant vehicle_plant() {
  LtiPlant p;
  p.a = Matrix{{1, 0, 0.1, 0}, {0, 1, 0, 0.1}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  p.b = Matrix{{0, 0}, {0, 0}, {1, 0}, {0, 1}};
  p.c = Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}};
  p.h_p = p.c;
  return p;
}

inline ExoSystem vehicle_exo() {
  return ExoSystem{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
}

inline FusionCenterGains vehicle_gains() {
  FusionCenterGains g;
  g.l = Matrix{{-0.7238, 0}, {0, -0.7238}, {-0.002, 0}, {0, -0.002}};
  g.k_x = Matrix{{-1, 0, -1, 0}, {0, -1, 0, -1}};
  g.k_r = Matrix::Identity(2, 2);
  return g;
}

inline LtiPlant scalar_plant(double a, double b, double c = 1, double h = 1) {
  return LtiPlant{Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b),
                  Matrix::Constant(1, 1, c), Matrix::Constant(1, 1, h)};
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows,
                            Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

// Random matrix rescaled to the requested spectral radius.
inline Matrix random_with_radius(std::mt19937_64& rng, Eigen::Index n,
                                 double radius) {
  Matrix m = random_matrix(rng, n, n);
  const double rho = eigenvalues(m).cwiseAbs().maxCoeff();
  return m * (radius / rho);
}

}  // namespace quantdp::fixture

#endif  // QUANTDP_TESTS_SUPPORT_FIXTURES_HPP_
