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

// Reference computations that share no code with the library under test.

#ifndef QUANTDP_TESTS_SUPPORT_ORACLES_HPP_
#define QUANTDP_TESTS_SUPPORT_ORACLES_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace quantdp::oracle {

// Truncated series sum_{k < terms} F^k W (F^k)^T.
inline Eigen::MatrixXd lyapunov_series(const Eigen::MatrixXd& f,
                                       const Eigen::MatrixXd& w, int terms) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(f.rows(), f.cols());
  Eigen::MatrixXd term = w;
  for (int k = 0; k < terms; ++k) {
    z += term;
    term = f * term * f.transpose();
  }
  return z;
}

// Hockey-stick divergence between N(0, 1) and N(s, 1) by composite Simpson
// quadrature of max(0, phi(x) - e^eps phi(x - s)).
inline double gaussian_hockey_stick(double epsilon, double s) {
  const auto phi = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
  };
  const auto integrand = [&](double x) {
    return std::max(0.0, phi(x) - std::exp(epsilon) * phi(x - s));
  };
  const double lo = -40.0;
  const double hi = 40.0 + s;
  const int n = 400000;  // even
  const double h = (hi - lo) / n;
  double sum = integrand(lo) + integrand(hi);
  for (int i = 1; i < n; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * h);
  }
  return sum * h / 3;
}

// Two-point law of the stochastic quantizer written out from its definition:
// y = z + n d with z in (0, d], P(n d) = 1 - z/d, P((n+1) d) = z/d.
struct Atom {
  long index;
  double prob;
};

inline std::vector<Atom> quantizer_law(double y, double d) {
  const long n = static_cast<long>(std::ceil(y / d)) - 1;
  double z = y - double(n) * d;
  if (std::abs(z - d) <= 1e-12 * std::max(1.0, std::abs(y))) z = d;
  if (z >= d) return {{n + 1, 1.0}};
  return {{n, 1 - z / d}, {n + 1, z / d}};
}

// Total variation of two product laws by walking all 2^m index patterns
// relative to each component's lower grid point.
inline double product_total_variation(const std::vector<double>& y,
                                      const std::vector<double>& y_prime,
                                      const std::vector<double>& d) {
  const std::size_t m = y.size();
  std::vector<long> base(m);
  for (std::size_t i = 0; i < m; ++i) {
    base[i] = std::min(static_cast<long>(std::floor(y[i] / d[i])),
                       static_cast<long>(std::floor(y_prime[i] / d[i]))) - 1;
  }
  const auto prob = [&](const std::vector<double>& v, std::size_t i, long idx) {
    for (const Atom& a : quantizer_law(v[i], d[i])) {
      if (a.index == idx) return a.prob;
    }
    return 0.0;
  };
  // Each component has at most four candidate indices base..base+3.
  double total = 0;
  std::vector<int> digit(m, 0);
  while (true) {
    double p = 1;
    double p_prime = 1;
    for (std::size_t i = 0; i < m; ++i) {
      p *= prob(y, i, base[i] + digit[i]);
      p_prime *= prob(y_prime, i, base[i] + digit[i]);
    }
    total += std::abs(p - p_prime);
    std::size_t i = 0;
    while (i < m && ++digit[i] == 4) digit[i++] = 0;
    if (i == m) break;
  }
  return total / 2;
}

}  // namespace quantdp::oracle

#endif  // QUANTDP_TESTS_SUPPORT_ORACLES_HPP_
