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

#include "quantdp/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "quantdp/error.hpp"
#include "quantdp/random.hpp"

namespace quantdp {
namespace {

int resolve_threads(int threads, long jobs) {
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return static_cast<int>(std::min<long>(threads, std::max(1L, jobs)));
}

// Calls job(i) for i in [0, count) on a pool of workers. If any job throws,
// the exception of the lowest failing index is rethrown after all finish.
void parallel_for(long count, int threads, const std::function<void(long)>& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < resolve_threads(threads, count); ++t) {
      pool.emplace_back(worker);
    }
    worker();
  }
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

double step_for(const SimulationConfig& cfg, long k) {
  switch (cfg.quantizer) {
    case QuantizerKind::kIdentity:
      return 0;
    case QuantizerKind::kDeterministic:
    case QuantizerKind::kStatic:
    case QuantizerKind::kDynamic:
      return step_at(cfg.schedule, k);
  }
  return 0;
}

CostEstimate summarize(const std::vector<double>& per_run) {
  CostEstimate out;
  out.runs = static_cast<long>(per_run.size());
  if (per_run.empty()) {
    throw Error(ErrorCode::kConfiguration, "empty ensemble");
  }
  double sum = 0;
  for (double value : per_run) sum += value;
  out.j_hat = sum / out.runs;
  if (out.runs > 1) {
    double sq = 0;
    for (double value : per_run) sq += (value - out.j_hat) * (value - out.j_hat);
    out.std_err = std::sqrt(sq / (out.runs - 1) / out.runs);
  }
  return out;
}

void require_weight(const Matrix& q_weight, Eigen::Index dim) {
  require_shape(q_weight, dim, dim, "weight Q");
  require_finite(q_weight, "weight Q");
  if ((q_weight - q_weight.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, q_weight.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kValidation, "weight Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q_weight);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, q_weight.norm())) {
    throw Error(ErrorCode::kValidation, "weight Q must be positive semidefinite");
  }
}

}  // namespace

void validate(const SimulationConfig& cfg) {
  validate(cfg.plant, cfg.exo, cfg.gains);
  require_shape(cfg.gains.k_r, cfg.plant.input_dim(), cfg.exo.state_dim(),
                "gain K_r");
  require_shape(cfg.x0, cfg.plant.state_dim(), 1, "x0");
  require_shape(cfg.x_hat0, cfg.plant.state_dim(), 1, "x_hat0");
  require_shape(cfg.x_r0, cfg.exo.state_dim(), 1, "x_r0");
  require_finite(cfg.x0, "x0");
  require_finite(cfg.x_hat0, "x_hat0");
  require_finite(cfg.x_r0, "x_r0");
  if (cfg.horizon < 1) {
    throw Error(ErrorCode::kValidation, "horizon must be >= 1");
  }
  if (cfg.quantizer != QuantizerKind::kIdentity) validate(cfg.schedule);
  if (!(cfg.noise.sigma >= 0) || cfg.noise.cutoff < 0) {
    throw Error(ErrorCode::kValidation, "noise needs sigma >= 0, cutoff >= 0");
  }
}

Trajectory simulate_closed_loop(const SimulationConfig& cfg, std::uint64_t run) {
  validate(cfg);
  const auto& plant = cfg.plant;
  const auto& exo = cfg.exo;
  const auto& gains = cfg.gains;
  const long horizon = cfg.horizon;

  Trajectory traj;
  traj.x.resize(plant.state_dim(), horizon);
  traj.x_hat.resize(plant.state_dim(), horizon);
  traj.x_r.resize(exo.state_dim(), horizon);
  traj.y.resize(plant.output_dim(), horizon);
  traj.v.resize(plant.output_dim(), horizon);
  traj.u.resize(plant.input_dim(), horizon);
  traj.w.resize(plant.input_dim(), horizon);
  traj.e_y.resize(plant.tracking_dim(), horizon);
  traj.d.resize(horizon);

  Vector x = cfg.x0;
  Vector x_hat = cfg.x_hat0;
  Vector x_r = cfg.x_r0;
  Vector v(plant.output_dim());
  Vector w(plant.input_dim());

  for (long k = 0; k < horizon; ++k) {
    const Vector y = plant.c * x;
    const double d = step_for(cfg, k);
    switch (cfg.quantizer) {
      case QuantizerKind::kIdentity:
        v = y;
        break;
      case QuantizerKind::kDeterministic:
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          v(i) = quantize_deterministic(y(i), d);
        }
        break;
      case QuantizerKind::kStatic:
      case QuantizerKind::kDynamic:
        if (d == 0) {
          v = y;
          break;
        }
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          Substream stream(cfg.seed, StreamPurpose::kQuantizer, run,
                           static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(i));
          v(i) = quantize_stochastic(y(i), d, stream);
        }
        break;
    }
    const Vector u = gains.k_x * x_hat + gains.k_r * x_r;
    if (k < cfg.noise.cutoff && cfg.noise.sigma > 0) {
      Substream stream(cfg.seed, StreamPurpose::kInputNoise, run,
                       static_cast<std::uint64_t>(k), 0);
      std::normal_distribution<double> normal(0.0, cfg.noise.sigma);
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(stream);
    } else {
      w.setZero();
    }

    traj.x.col(k) = x;
    traj.x_hat.col(k) = x_hat;
    traj.x_r.col(k) = x_r;
    traj.y.col(k) = y;
    traj.v.col(k) = v;
    traj.u.col(k) = u;
    traj.w.col(k) = w;
    traj.e_y.col(k) = plant.h_p * x - exo.h_r * x_r;
    traj.d(k) = d;

    x = plant.a * x + plant.b * (u + w);
    x_hat = plant.a * x_hat + plant.b * u + gains.l * (plant.c * x_hat - v);
    x_r = exo.a_r * x_r;

    const double size =
        std::max({x.cwiseAbs().maxCoeff(), x_hat.cwiseAbs().maxCoeff(),
                  x_r.size() ? x_r.cwiseAbs().maxCoeff() : 0.0});
    if (!(size <= kDivergenceThreshold)) {
      throw DivergenceError(k + 1, "state diverged at step " +
                                       std::to_string(k + 1) + " (run " +
                                       std::to_string(run) + ")");
    }
  }
  return traj;
}

std::vector<Trajectory> simulate_ensemble(const SimulationConfig& cfg, long runs,
                                          int threads) {
  return simulate_batch(cfg, 0, runs, threads);
}

std::vector<Trajectory> simulate_batch(const SimulationConfig& cfg,
                                       long first_run, long count, int threads) {
  validate(cfg);
  if (count < 1 || first_run < 0) {
    throw Error(ErrorCode::kConfiguration, "runs must be >= 1");
  }
  std::vector<Trajectory> out(count);
  parallel_for(count, threads, [&](long i) {
    out[i] = simulate_closed_loop(cfg, static_cast<std::uint64_t>(first_run + i));
  });
  return out;
}

double recursion_residual(const SimulationConfig& cfg, const Trajectory& traj) {
  const auto& plant = cfg.plant;
  double worst = 0;
  for (long k = 0; k < traj.steps(); ++k) {
    const Vector x = traj.x.col(k);
    const Vector x_hat = traj.x_hat.col(k);
    const Vector x_r = traj.x_r.col(k);
    const Vector u = traj.u.col(k);
    worst = std::max(worst, (traj.y.col(k) - plant.c * x).cwiseAbs().maxCoeff());
    worst = std::max(worst, (u - cfg.gains.k_x * x_hat - cfg.gains.k_r * x_r)
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(worst, (traj.e_y.col(k) - (plant.h_p * x - cfg.exo.h_r * x_r))
                                .cwiseAbs()
                                .maxCoeff());
    if (k + 1 < traj.steps()) {
      const Vector x_next = plant.a * x + plant.b * (u + traj.w.col(k));
      const Vector x_hat_next = plant.a * x_hat + plant.b * u +
                                cfg.gains.l * (plant.c * x_hat - traj.v.col(k));
      const Vector x_r_next = cfg.exo.a_r * x_r;
      worst = std::max(worst, (traj.x.col(k + 1) - x_next).cwiseAbs().maxCoeff());
      worst = std::max(worst,
                       (traj.x_hat.col(k + 1) - x_hat_next).cwiseAbs().maxCoeff());
      worst = std::max(worst,
                       (traj.x_r.col(k + 1) - x_r_next).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double run_tracking_cost(const Trajectory& traj, const Matrix& q_weight,
                         long burn_in, long window) {
  if (window < 1 || burn_in < 0) {
    throw Error(ErrorCode::kConfiguration, "cost window must be nonempty");
  }
  if (burn_in + window > traj.steps()) {
    throw Error(ErrorCode::kConfiguration,
                "burn_in + window exceeds the simulated horizon");
  }
  double sum = 0;
  for (long k = burn_in; k < burn_in + window; ++k) {
    const auto e = traj.e_y.col(k);
    sum += e.dot(q_weight * e);
  }
  return sum / window;
}

CostEstimate estimate_tracking_cost(std::span<const Trajectory> trajectories,
                                    const Matrix& q_weight, long burn_in,
                                    long window) {
  if (trajectories.empty()) {
    throw Error(ErrorCode::kConfiguration, "empty ensemble");
  }
  require_weight(q_weight, trajectories.front().e_y.rows());
  std::vector<double> per_run;
  per_run.reserve(trajectories.size());
  for (const auto& traj : trajectories) {
    per_run.push_back(run_tracking_cost(traj, q_weight, burn_in, window));
  }
  return summarize(per_run);
}

CostEstimate monte_carlo_tracking_cost(const SimulationConfig& cfg, long runs,
                                       const Matrix& q_weight, long burn_in,
                                       long window, int threads) {
  validate(cfg);
  require_weight(q_weight, cfg.plant.tracking_dim());
  if (runs < 1) throw Error(ErrorCode::kConfiguration, "runs must be >= 1");
  if (window < 1 || burn_in < 0 || burn_in + window > cfg.horizon) {
    throw Error(ErrorCode::kConfiguration,
                "need window >= 1 and burn_in + window <= horizon");
  }
  std::vector<double> per_run(runs);
  parallel_for(runs, threads, [&](long r) {
    per_run[r] = run_tracking_cost(
        simulate_closed_loop(cfg, static_cast<std::uint64_t>(r)), q_weight,
        burn_in, window);
  });
  return summarize(per_run);
}

CostBound tracking_cost_bound(const LtiPlant& plant, const ExoSystem& exo,
                              const FusionCenterGains& gains,
                              const Matrix& q_weight, double d) {
  validate(plant, exo, gains);
  require_weight(q_weight, plant.tracking_dim());
  if (!(d >= 0) || !std::isfinite(d)) {
    throw Error(ErrorCode::kValidation, "quantization step must be >= 0");
  }
  if (gains.k_r.size() == 0) {
    throw Error(ErrorCode::kValidation, "gain K_r is required");
  }
  const Matrix state_feedback = plant.a + plant.b * gains.k_x;
  const Matrix observer = plant.a + gains.l * plant.c;
  if (!is_schur_stable(state_feedback)) {
    throw Error(ErrorCode::kHypothesisViolated,
                "A + B K_x is not Schur stable (spectral radius " +
                    std::to_string(spectral_radius(state_feedback)) + ")");
  }
  if (!is_schur_stable(observer)) {
    throw Error(ErrorCode::kHypothesisViolated,
                "A + L C is not Schur stable (spectral radius " +
                    std::to_string(spectral_radius(observer)) + ")");
  }
  const RegulatorSolution regulator = regulator_least_squares(plant, exo);
  if (!(regulator.residual <= kRegulatorConsistencyTolerance)) {
    throw Error(ErrorCode::kHypothesisViolated,
                "regulator equations have no solution");
  }
  const double kr_defect =
      (gains.k_r - gain_kr(gains.k_x, regulator)).cwiseAbs().maxCoeff();
  if (kr_defect > 1e-8) {
    throw Error(ErrorCode::kHypothesisViolated,
                "K_r differs from U - K_x X by " + std::to_string(kr_defect));
  }

  const auto n = plant.state_dim();
  Matrix injection(2 * n, plant.output_dim());
  injection << gains.l, gains.l;
  const Matrix closed_loop = closed_loop_matrix(plant, gains);

  CostBound out;
  out.z = solve_discrete_lyapunov(closed_loop,
                                  injection * injection.transpose());
  out.trace_z = out.z.trace();
  out.trace_weight = (plant.h_p.transpose() * q_weight * plant.h_p).trace();
  out.value = 0.5 * d * d * out.trace_weight * out.trace_z;
  return out;
}

MomentReport quantization_error_moments(std::span<const QuantizationSample> at_k,
                                        std::span<const QuantizationSample> at_l) {
  constexpr long kMinSamples = 10000;
  if (static_cast<long>(at_k.size()) < kMinSamples) {
    throw Error(ErrorCode::kValidation,
                "moment checks need at least 10^4 samples");
  }
  if (!at_l.empty() && at_l.size() != at_k.size()) {
    throw Error(ErrorCode::kDimension, "paired samples must have equal counts");
  }
  MomentReport report;
  report.count = static_cast<long>(at_k.size());
  const double n = static_cast<double>(report.count);

  std::vector<double> errors(at_k.size());
  double sum = 0;
  double sum_sq = 0;
  double expected = 0;
  for (std::size_t i = 0; i < at_k.size(); ++i) {
    const auto& s = at_k[i];
    errors[i] = s.output - s.y;
    sum += errors[i];
    sum_sq += errors[i] * errors[i];
    expected += output_pmf(s.y, s.d).variance();
  }
  report.mean = sum / n;
  report.second_moment = sum_sq / n;
  report.expected_second_moment = expected / n;

  double var_e = 0;
  double var_sq = 0;
  for (double e : errors) {
    var_e += (e - report.mean) * (e - report.mean);
    const double dev = e * e - report.second_moment;
    var_sq += dev * dev;
  }
  report.mean_std_err = std::sqrt(var_e / (n - 1) / n);
  report.second_moment_std_err = std::sqrt(var_sq / (n - 1) / n);
  // A zero standard error means a degenerate (grid-aligned) sample; the
  // comparison then has to be exact up to rounding.
  report.mean_ok = std::abs(report.mean) <= 4 * report.mean_std_err + 1e-12;
  report.second_moment_ok =
      std::abs(report.second_moment - report.expected_second_moment) <=
      4 * report.second_moment_std_err + 1e-12;

  if (!at_l.empty()) {
    double mean_l = 0;
    for (const auto& s : at_l) mean_l += s.output - s.y;
    mean_l /= n;
    double cov = 0;
    double var_l = 0;
    for (std::size_t i = 0; i < at_l.size(); ++i) {
      const double el = at_l[i].output - at_l[i].y - mean_l;
      cov += (errors[i] - report.mean) * el;
      var_l += el * el;
    }
    report.correlation =
        (var_e > 0 && var_l > 0) ? cov / std::sqrt(var_e * var_l) : 0.0;
    report.correlation_ok = std::abs(report.correlation) <= 4 / std::sqrt(n);
  }
  return report;
}

}  // namespace quantdp
