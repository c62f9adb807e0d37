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

#include "quantdp/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

#include "quantdp/cli/scenario.hpp"
#include "quantdp/linalg.hpp"
#include "quantdp/plant.hpp"
#include "quantdp/privacy.hpp"

namespace quantdp::cli {
namespace {

using Summary = std::vector<std::pair<std::string, std::string>>;

std::string num(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string exact(double value) { return num(value, 17); }

std::string flag(bool value) { return value ? "true" : "false"; }

std::string matrix_text(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << " ";
      os << num(m(i, j));
    }
  }
  os << "]";
  return os.str();
}

ScenarioConfig load_with_overrides(const CliOptions& options) {
  if (options.config_path.empty()) {
    throw Error(ErrorCode::kValidation, "--config is required");
  }
  ScenarioConfig cfg = load_scenario(options.config_path);
  if (options.seed) cfg.sim.seed = *options.seed;
  if (options.runs) cfg.sim.runs = *options.runs;
  if (options.horizon) {
    cfg.sim.horizon = *options.horizon;
    cfg.sim.burn_in.reset();
    cfg.sim.window.reset();
  }
  if (cfg.sim.runs < 1 || cfg.sim.horizon < 1) {
    throw Error(ErrorCode::kValidation, "runs and horizon must be >= 1");
  }
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw Error(ErrorCode::kConfiguration, "cannot write " + path.string());
  }
  file << text;
}

void emit(const Summary& summary, const std::string& name,
          const CliOptions& options, std::ostream& out) {
  std::ostringstream text;
  for (const auto& [key, value] : summary) text << key << "=" << value << "\n";
  if (!options.quiet) out << text.str();
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    write_file(std::filesystem::path(options.out_dir) / (name + "_summary.txt"),
               text.str());
  }
}

double require_zeta(const ScenarioConfig& cfg) {
  if (!cfg.privacy.zeta) {
    throw Error(ErrorCode::kValidation, "privacy.zeta is required");
  }
  return *cfg.privacy.zeta;
}

int run_check(const CliOptions& options, std::ostream& out) {
  const ScenarioConfig cfg = load_with_overrides(options);
  const AssumptionReport report = check_assumptions(cfg.plant, cfg.exo);
  Summary summary{
      {"a1_exo_modulus_ok", flag(report.a1_exo_modulus_ok)},
      {"a2_stabilizable", flag(report.a2_stabilizable)},
      {"a3_detectable", flag(report.a3_detectable)},
      {"a4_regulator_solvable", flag(report.a4_regulator_solvable)},
      {"all_hold", flag(report.all_hold())},
  };
  emit(summary, "check", options, out);
  if (!options.quiet) out << report.details;
  return report.all_hold() ? kExitOk : kExitHypothesis;
}

int run_design(const CliOptions& options, std::ostream& out) {
  const ScenarioConfig cfg = load_with_overrides(options);
  const double zeta = require_zeta(cfg);
  const auto kind = cfg.quantizer.kind;
  if (kind == QuantizerKind::kDeterministic || kind == QuantizerKind::kIdentity) {
    throw Error(ErrorCode::kUnsupportedRegime,
                "only stochastic quantizers carry a privacy guarantee");
  }
  const ContractionEstimate est = estimate_beta_lambda(cfg.plant.a);
  const double c_norm1 = induced_norm_1(cfg.plant.c);
  const double q = kind == QuantizerKind::kDynamic ? cfg.quantizer.schedule.q : 1.0;
  Summary summary{{"beta", exact(est.beta)},
                  {"lambda", exact(est.lambda)},
                  {"c_norm1", exact(c_norm1)},
                  {"zeta", exact(zeta)}};

  if (cfg.privacy.has_split_budget()) {
    const UnstableDesign design = design_unstable_mechanism(
        cfg.plant, est, zeta, *cfg.privacy.epsilon0, *cfg.privacy.delta1,
        *cfg.privacy.delta2, q, cfg.quantizer.schedule.d_star);
    summary.insert(summary.end(),
                   {{"route", "unstable-gaussian-input"},
                    {"n_star", std::to_string(design.n_star)},
                    {"d0", exact(design.schedule.d0)},
                    {"d_star", exact(design.schedule.d_star)},
                    {"q", exact(design.schedule.q)},
                    {"sigma", exact(design.sigma)},
                    {"sigma_squared", exact(design.sigma * design.sigma)},
                    {"noise_cutoff", std::to_string(design.n_star)},
                    {"noise_gain", exact(design.noise_gain)},
                    {"epsilon", exact(design.epsilon())},
                    {"delta", exact(design.delta())}});
    emit(summary, "design", options, out);
    return kExitOk;
  }

  if (!cfg.privacy.delta) {
    throw Error(ErrorCode::kValidation,
                "privacy.delta (or epsilon0/delta1/delta2) is required");
  }
  const double delta = *cfg.privacy.delta;
  const bool infinite = est.lambda < 1;
  const Horizon horizon = infinite ? Horizon::infinite()
                                   : Horizon::finite(int(cfg.sim.horizon - 1));
  summary.emplace_back("horizon", infinite ? std::string("infinite")
                                           : std::to_string(cfg.sim.horizon));
  if (kind == QuantizerKind::kStatic) {
    const double d = static_step_bound(est, c_norm1, zeta, delta, horizon);
    summary.insert(summary.end(),
                   {{"route", infinite ? "static-infinite-horizon"
                                       : "static-finite-horizon"},
                    {"d0", exact(d)},
                    {"d_star", exact(d)},
                    {"q", "1"}});
  } else {
    const DynamicStepBound bound =
        dynamic_step_bound(est, c_norm1, zeta, delta, q, horizon);
    std::string route;
    if (!infinite) {
      route = "dynamic-finite-horizon";
    } else if (bound.d0_min) {
      route = "dynamic-infinite-horizon-initial-step";
    } else {
      route = "dynamic-infinite-horizon-terminal-step";
    }
    summary.emplace_back("route", route);
    summary.emplace_back("d0_min", bound.d0_min ? exact(*bound.d0_min) : "unavailable");
    summary.emplace_back("d_star_min",
                         bound.d_star_min ? exact(*bound.d_star_min) : "unavailable");
    summary.emplace_back("q", exact(q));
  }
  summary.emplace_back("epsilon", "0");
  summary.emplace_back("delta", exact(delta));
  emit(summary, "design", options, out);
  return kExitOk;
}

int run_simulate(const CliOptions& options, std::ostream& out) {
  const ScenarioConfig cfg = load_with_overrides(options);
  const SimulationConfig sim = to_simulation_config(cfg);
  const long burn_in = cfg.sim.effective_burn_in();
  const long window = cfg.sim.effective_window();
  const Matrix weight =
      Matrix::Identity(cfg.plant.tracking_dim(), cfg.plant.tracking_dim());

  std::vector<double> per_run;
  std::ostringstream runs_csv;
  runs_csv << "run,j_run\n";
  if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);
  // Batches bound the number of trajectories held in memory at once.
  constexpr long kBatch = 64;
  for (long first = 0; first < cfg.sim.runs; first += kBatch) {
    const std::vector<Trajectory> batch =
        simulate_batch(sim, first, std::min(kBatch, cfg.sim.runs - first));
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const long run = first + long(i);
      const double j = run_tracking_cost(batch[i], weight, burn_in, window);
      per_run.push_back(j);
      runs_csv << run << "," << exact(j) << "\n";
      if (!options.out_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%04ld.csv", run);
        write_file(std::filesystem::path(options.out_dir) / name,
                   trajectory_csv(batch[i]));
      }
    }
  }
  if (!options.out_dir.empty()) {
    write_file(std::filesystem::path(options.out_dir) / "summary.csv",
               runs_csv.str());
  }

  double mean = 0;
  for (double j : per_run) mean += j;
  mean /= double(per_run.size());
  double var = 0;
  for (double j : per_run) var += (j - mean) * (j - mean);
  const double std_err =
      per_run.size() > 1
          ? std::sqrt(var / double(per_run.size() - 1) / double(per_run.size()))
          : 0.0;
  Summary summary{{"runs", std::to_string(per_run.size())},
                  {"horizon", std::to_string(cfg.sim.horizon)},
                  {"burn_in", std::to_string(burn_in)},
                  {"window", std::to_string(window)},
                  {"seed", std::to_string(cfg.sim.seed)},
                  {"j_hat", exact(mean)},
                  {"std_err", exact(std_err)}};
  emit(summary, "simulate", options, out);
  if (!options.quiet) out << "J = " << num(mean) << " +/- " << num(std_err) << "\n";
  return kExitOk;
}

int run_audit(const CliOptions& options, std::ostream& out) {
  const ScenarioConfig cfg = load_with_overrides(options);
  const double zeta = require_zeta(cfg);
  if (cfg.quantizer.kind != QuantizerKind::kStatic &&
      cfg.quantizer.kind != QuantizerKind::kDynamic) {
    throw Error(ErrorCode::kUnsupportedRegime,
                "audit needs a stochastic quantizer");
  }
  const double epsilon = cfg.privacy.epsilon.value_or(0.0);
  const int last = int(cfg.sim.horizon - 1);
  const long components = cfg.sim.horizon * cfg.plant.output_dim();
  if (components > kAuditComponentLimit) {
    throw Error(ErrorCode::kEnumerationLimit,
                "audit horizon too long: " + std::to_string(components) +
                    " components exceed " + std::to_string(kAuditComponentLimit));
  }
  std::vector<double> steps;
  for (int t = 0; t <= last; ++t) steps.push_back(step_at(cfg.quantizer.schedule, t));

  const Vector y = mechanism_mean(cfg.plant, cfg.x0, Vector(), last);
  double worst = 0;
  for (Eigen::Index i = 0; i < cfg.plant.state_dim(); ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector x0_prime = cfg.x0;
      x0_prime(i) += sign * zeta;
      const Vector y_prime = mechanism_mean(cfg.plant, x0_prime, Vector(), last);
      worst = std::max(worst, audit_zero_eps({y.data(), std::size_t(y.size())},
                                            {y_prime.data(), std::size_t(y_prime.size())},
                                            steps, epsilon));
    }
  }
  const ContractionEstimate est = estimate_beta_lambda(cfg.plant.a);
  const double bound = privacy_delta_bound(est, induced_norm_1(cfg.plant.c), zeta,
                                           cfg.quantizer.schedule, last);
  Summary summary{{"horizon", std::to_string(cfg.sim.horizon)},
                  {"epsilon", exact(epsilon)},
                  {"zeta", exact(zeta)},
                  {"divergence", exact(worst)},
                  {"delta_bound", exact(bound)},
                  {"within_bound", flag(worst <= bound + 1e-12)}};
  emit(summary, "audit", options, out);
  return kExitOk;
}

int run_bound(const CliOptions& options, std::ostream& out) {
  const ScenarioConfig cfg = load_with_overrides(options);
  const double d = cfg.quantizer.kind == QuantizerKind::kDynamic
                       ? cfg.quantizer.schedule.d_star
                       : cfg.quantizer.schedule.d0;
  const Matrix weight =
      Matrix::Identity(cfg.plant.tracking_dim(), cfg.plant.tracking_dim());
  const CostBound bound = tracking_cost_bound(cfg.plant, cfg.exo, cfg.gains, weight, d);
  Summary summary{{"d", exact(d)},
                  {"trace_weight", exact(bound.trace_weight)},
                  {"trace_z", exact(bound.trace_z)},
                  {"bound", exact(bound.value)}};
  emit(summary, "bound", options, out);
  if (!options.quiet) {
    out << "trace(Z)=" << num(bound.trace_z, 5) << " bound=" << num(bound.value, 5)
        << "\n";
  }
  return kExitOk;
}

struct ReproRow {
  std::string quantity;
  std::string computed;
  std::string reported;
  std::string note;
};

int run_repro(const CliOptions& options, std::ostream& out) {
  ScenarioConfig fixed = vehicle_scenario(false);
  ScenarioConfig zoom = vehicle_scenario(true);
  for (ScenarioConfig* cfg : {&fixed, &zoom}) {
    if (options.seed) cfg->sim.seed = *options.seed;
    if (options.runs) cfg->sim.runs = *options.runs;
    if (options.horizon) {
      cfg->sim.horizon = *options.horizon;
      cfg->sim.burn_in.reset();
      cfg->sim.window.reset();
    }
  }
  const LtiPlant& plant = fixed.plant;
  const Matrix weight = Matrix::Identity(2, 2);
  const double zeta = *fixed.privacy.zeta;
  const double epsilon0 = *fixed.privacy.epsilon0;
  const double delta1 = *fixed.privacy.delta1;
  const double reported_delta2 = *fixed.privacy.delta2;
  std::vector<ReproRow> rows;

  const CostBound bound = tracking_cost_bound(plant, fixed.exo, fixed.gains, weight, 4);
  Matrix injection(8, 2);
  injection << fixed.gains.l, fixed.gains.l;
  const Matrix forcing = injection * injection.transpose();
  const Matrix closed_loop = closed_loop_matrix(plant, fixed.gains);
  const double two_term =
      (forcing + closed_loop * forcing * closed_loop.transpose()).trace();
  rows.push_back({"trace(H_p' Q H_p)", num(bound.trace_weight), "2", ""});
  rows.push_back({"trace(Z)", num(bound.trace_z, 6), "3.3135",
                  "[note:trace_z] reported value matches the two-term partial "
                  "sum trace(W + F W F') = " + num(two_term, 6) +
                      ", not the Lyapunov solution"});
  rows.push_back({"cost bound J (d = 4)", num(bound.value, 6), "53.0",
                  "follows trace(Z)"});

  const RegulatorSolution regulator = solve_regulator_equations(plant, fixed.exo);
  rows.push_back({"K_r = U - K_x X", matrix_text(gain_kr(fixed.gains.k_x, regulator)),
                  "[1 0; 0 1]", "regulator residual " + num(regulator.residual, 3)});
  const ContractionEstimate est = estimate_beta_lambda(plant.a);
  rows.push_back({"beta, lambda", num(est.beta) + ", " + num(est.lambda), "1, 1", ""});
  const ControllabilityData reach = controllability_data(plant);
  rows.push_back({"n*, C B = 0",
                  std::to_string(reach.n_star) + ", " +
                      flag(markov_zero_check(plant, reach.n_star)),
                  "2, true", ""});

  const UnstableDesign design =
      design_unstable_mechanism(plant, est, zeta, epsilon0, delta1, reported_delta2, 1);
  rows.push_back({"static d(0) for delta1 = 0.05", num(design.schedule.d0), "4",
                  "[note:zeta] zeta = 0.1 assumed; not stated with the example"});
  const double s = design.noise_gain * zeta / std::sqrt(5.0);
  const double delta2 = kappa(epsilon0, s);
  rows.push_back({"delta2 at sigma^2 = 5", num(delta2, 6), "0.0461",
                  "[note:delta2] computed from the kappa curve at s = " + num(s, 6) +
                      "; reported value not reproduced"});
  rows.push_back({"sigma^2 needed for delta2 = 0.0461",
                  num(design.sigma * design.sigma, 6), "5", ""});
  rows.push_back({"static total delta", num(delta1 + delta2, 6), "0.0961", ""});
  const StepSchedule zoom_schedule = zoom.quantizer.schedule;
  const double dyn_delta1 = privacy_delta_bound(est, induced_norm_1(plant.c), zeta,
                                                zoom_schedule, reach.n_star - 1);
  rows.push_back({"dynamic delta1 (d0 = 10, q = 0.99)", num(dyn_delta1, 6), "0.0199",
                  "[note:delta1] computed as zeta (1 + 1/q) / d0; reported value "
                  "equals zeta (1 + q) / d0 = " +
                      num(zeta * (1 + zoom_schedule.q) / zoom_schedule.d0, 6)});
  rows.push_back({"dynamic total delta", num(dyn_delta1 + delta2, 6), "0.0660", ""});

  const CostEstimate fixed_cost = monte_carlo_tracking_cost(
      to_simulation_config(fixed), fixed.sim.runs, weight,
      fixed.sim.effective_burn_in(), fixed.sim.effective_window());
  rows.push_back({"Monte Carlo J, static d = 4",
                  num(fixed_cost.j_hat, 4) + " +/- " + num(fixed_cost.std_err, 2),
                  "<= 53.0", std::to_string(fixed_cost.runs) + " runs"});
  const CostEstimate zoom_cost = monte_carlo_tracking_cost(
      to_simulation_config(zoom), zoom.sim.runs, weight,
      zoom.sim.effective_burn_in(), zoom.sim.effective_window());
  rows.push_back({"Monte Carlo J, dynamic", num(zoom_cost.j_hat, 4), "0",
                  std::to_string(zoom_cost.runs) + " runs"});

  const ScenarioConfig rounding = motivating_scenario(QuantizerKind::kDeterministic);
  SimulationConfig rounding_sim = to_simulation_config(rounding);
  rounding_sim.horizon = 101;
  const Trajectory stuck = simulate_closed_loop(rounding_sim);
  const bool silent = stuck.v.cwiseAbs().maxCoeff() == 0 &&
                      stuck.u.cwiseAbs().maxCoeff() == 0;
  rows.push_back({"scalar example, deterministic d = 2",
                  "v = u = 0: " + flag(silent) + ", |x| in [" +
                      num(stuck.x.cwiseAbs().minCoeff()) + ", " +
                      num(stuck.x.cwiseAbs().maxCoeff()) + "]",
                  "fails to stabilize", ""});
  const ScenarioConfig dither = motivating_scenario(QuantizerKind::kStatic);
  SimulationConfig dither_sim = to_simulation_config(dither);
  long diverged = 0;
  long first_step = -1;
  for (long r = 0; r < dither.sim.runs; ++r) {
    try {
      simulate_closed_loop(dither_sim, std::uint64_t(r));
    } catch (const DivergenceError& e) {
      ++diverged;
      first_step = first_step < 0 ? e.step() : std::min(first_step, e.step());
    }
  }
  rows.push_back({"scalar example, stochastic d = 2",
                  std::to_string(diverged) + "/" + std::to_string(dither.sim.runs) +
                      " runs diverged" +
                      (diverged ? " (earliest step " + std::to_string(first_step) + ")"
                                : std::string()),
                  "improves on deterministic",
                  "A + L C = " +
                      num((dither.plant.a + dither.gains.l * dither.plant.c)(0, 0)) +
                      " is not Schur stable"});

  if (!options.quiet) {
    out << std::left << std::setw(38) << "quantity" << std::setw(44) << "computed"
        << std::setw(26) << "reported" << "note\n";
    for (const auto& row : rows) {
      out << std::setw(38) << row.quantity << std::setw(44) << row.computed
          << std::setw(26) << row.reported << row.note << "\n";
    }
  }
  Summary summary{{"trace_z", exact(bound.trace_z)},
                  {"trace_z_two_term", exact(two_term)},
                  {"bound", exact(bound.value)},
                  {"delta2_at_sigma2_5", exact(delta2)},
                  {"dynamic_delta1", exact(dyn_delta1)},
                  {"j_static", exact(fixed_cost.j_hat)},
                  {"j_dynamic", exact(zoom_cost.j_hat)},
                  {"scalar_stochastic_diverged", std::to_string(diverged)}};
  if (!options.out_dir.empty()) {
    std::ostringstream quiet_sink;
    CliOptions file_only = options;
    file_only.quiet = true;
    emit(summary, "repro", file_only, quiet_sink);
  }
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension:
    case ErrorCode::kValidation:
    case ErrorCode::kConfiguration:
    case ErrorCode::kEnumerationLimit:
      return kExitValidation;
    case ErrorCode::kInstability:
    case ErrorCode::kSingular:
    case ErrorCode::kInfeasible:
    case ErrorCode::kUncontrollable:
    case ErrorCode::kUnsupportedStructure:
    case ErrorCode::kHypothesisViolated:
      return kExitHypothesis;
    case ErrorCode::kNotConverged:
    case ErrorCode::kUnsupportedRegime:
      return kExitUnsupported;
    case ErrorCode::kDivergence:
      return kExitDivergence;
  }
  return kExitValidation;
}

int run_subcommand(const std::string& name, const CliOptions& options,
                   std::ostream& out, std::ostream& err) {
  try {
    if (name == "check") return run_check(options, out);
    if (name == "design") return run_design(options, out);
    if (name == "simulate") return run_simulate(options, out);
    if (name == "audit") return run_audit(options, out);
    if (name == "bound") return run_bound(options, out);
    if (name == "repro") return run_repro(options, out);
    throw Error(ErrorCode::kValidation, "unknown subcommand '" + name + "'");
  } catch (const Error& e) {
    const int status = exit_code_for(e.code());
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '"', '\'');
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error code=" << error_code_name(e.code()) << " exit=" << status
        << " message=\"" << message << "\"\n";
    return status;
  }
}

std::string trajectory_csv_header(const Trajectory& traj) {
  std::ostringstream os;
  os << "k";
  const auto columns = [&](const char* prefix, Eigen::Index count) {
    for (Eigen::Index i = 1; i <= count; ++i) os << "," << prefix << i;
  };
  columns("x_", traj.x.rows());
  columns("xhat_", traj.x_hat.rows());
  columns("xr_", traj.x_r.rows());
  columns("y_", traj.y.rows());
  columns("v_", traj.v.rows());
  columns("u_", traj.u.rows());
  columns("ey_", traj.e_y.rows());
  os << ",d_k";
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string text = trajectory_csv_header(traj) + "\n";
  for (long k = 0; k < traj.steps(); ++k) {
    text += std::to_string(k);
    for (const Matrix* block : {&traj.x, &traj.x_hat, &traj.x_r, &traj.y, &traj.v,
                                &traj.u, &traj.e_y}) {
      for (Eigen::Index i = 0; i < block->rows(); ++i) {
        text += ",";
        text += exact((*block)(i, k));
      }
    }
    text += ",";
    text += exact(traj.d(k));
    text += "\n";
  }
  return text;
}

}  // namespace quantdp::cli
