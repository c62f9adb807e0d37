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

#include "quantdp/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "quantdp/error.hpp"

namespace quantdp::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::kValidation, "config: " + message);
}

void reject_unknown(const json& section, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!section.is_object()) fail(where + " must be an object");
  for (const auto& item : section.items()) {
    if (!allowed.contains(item.key())) {
      fail("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double read_number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where + " must be a number");
  const double out = value.get<double>();
  if (!std::isfinite(out)) fail(where + " must be finite");
  return out;
}

// Row-major nested arrays; a bare number is a 1x1 matrix.
Matrix read_matrix(const json& value, const std::string& where) {
  if (value.is_number()) return Matrix::Constant(1, 1, read_number(value, where));
  if (!value.is_array() || value.empty()) {
    fail(where + " must be a non-empty nested array");
  }
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (!value[0].is_array() || value[0].empty()) {
    fail(where + " must be an array of rows");
  }
  const auto cols = static_cast<Eigen::Index>(value[0].size());
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = value[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(where + " has ragged rows");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = read_number(row[j], where);
    }
  }
  return out;
}

Vector read_vector(const json& value, const std::string& where) {
  if (value.is_number()) return Vector::Constant(1, read_number(value, where));
  if (!value.is_array() || value.empty()) fail(where + " must be an array");
  Vector out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out(i) = read_number(value[i], where);
  }
  return out;
}

std::optional<double> read_optional(const json& section, const char* key,
                                    const std::string& where) {
  if (!section.contains(key)) return std::nullopt;
  return read_number(section.at(key), where + "." + key);
}

long read_count(const json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(where + " must be an integer");
  return value.get<long>();
}

const json& require_section(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(std::string("missing section '") + key + "'");
  return doc.at(key);
}

const json& require_key(const json& section, const char* key,
                        const std::string& where) {
  if (!section.contains(key)) fail("missing key '" + where + "." + key + "'");
  return section.at(key);
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string kind_name(QuantizerKind kind) {
  switch (kind) {
    case QuantizerKind::kIdentity: return "identity";
    case QuantizerKind::kDeterministic: return "deterministic";
    case QuantizerKind::kStatic: return "static";
    case QuantizerKind::kDynamic: return "dynamic";
  }
  return "static";
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  reject_unknown(doc, "scenario",
                 {"plant", "exo", "gains", "quantizer", "noise", "privacy",
                  "sim", "initial"});
  ScenarioConfig cfg;

  const json& plant = require_section(doc, "plant");
  reject_unknown(plant, "plant", {"a", "b", "c", "h_p"});
  cfg.plant.a = read_matrix(require_key(plant, "a", "plant"), "plant.a");
  cfg.plant.b = read_matrix(require_key(plant, "b", "plant"), "plant.b");
  cfg.plant.c = read_matrix(require_key(plant, "c", "plant"), "plant.c");
  cfg.plant.h_p = read_matrix(require_key(plant, "h_p", "plant"), "plant.h_p");

  const json& exo = require_section(doc, "exo");
  reject_unknown(exo, "exo", {"a_r", "h_r"});
  cfg.exo.a_r = read_matrix(require_key(exo, "a_r", "exo"), "exo.a_r");
  cfg.exo.h_r = read_matrix(require_key(exo, "h_r", "exo"), "exo.h_r");

  const json& gains = require_section(doc, "gains");
  reject_unknown(gains, "gains", {"l", "k_x", "k_r"});
  cfg.gains.l = read_matrix(require_key(gains, "l", "gains"), "gains.l");
  cfg.gains.k_x = read_matrix(require_key(gains, "k_x", "gains"), "gains.k_x");
  if (gains.contains("k_r")) {
    cfg.gains.k_r = read_matrix(gains.at("k_r"), "gains.k_r");
  }
  validate(cfg.plant, cfg.exo, cfg.gains);
  if (cfg.gains.k_r.size() == 0) {
    cfg.gains.k_r =
        gain_kr(cfg.gains.k_x, solve_regulator_equations(cfg.plant, cfg.exo));
    cfg.k_r_derived = true;
  }

  const json& quantizer = require_section(doc, "quantizer");
  reject_unknown(quantizer, "quantizer", {"kind", "d0", "d_star", "q"});
  const json& kind = require_key(quantizer, "kind", "quantizer");
  if (!kind.is_string()) fail("quantizer.kind must be a string");
  const std::string kind_text = kind.get<std::string>();
  if (kind_text == "deterministic") {
    cfg.quantizer.kind = QuantizerKind::kDeterministic;
  } else if (kind_text == "static") {
    cfg.quantizer.kind = QuantizerKind::kStatic;
  } else if (kind_text == "dynamic") {
    cfg.quantizer.kind = QuantizerKind::kDynamic;
  } else if (kind_text == "identity") {
    cfg.quantizer.kind = QuantizerKind::kIdentity;
  } else {
    fail("quantizer.kind must be deterministic, static, dynamic or identity");
  }
  if (cfg.quantizer.kind == QuantizerKind::kIdentity) {
    cfg.quantizer.schedule = StepSchedule::fixed(1);
  } else {
    const double d0 =
        read_number(require_key(quantizer, "d0", "quantizer"), "quantizer.d0");
    const auto q = read_optional(quantizer, "q", "quantizer");
    const auto d_star = read_optional(quantizer, "d_star", "quantizer");
    if (cfg.quantizer.kind == QuantizerKind::kDynamic) {
      if (!q || !d_star) fail("dynamic quantizer needs d_star and q");
      cfg.quantizer.schedule = StepSchedule{d0, *d_star, *q};
    } else {
      if ((q && *q != 1) || (d_star && *d_star != d0)) {
        fail("static and deterministic quantizers need q = 1 and d_star = d0");
      }
      cfg.quantizer.schedule = StepSchedule::fixed(d0);
    }
    validate(cfg.quantizer.schedule);
  }

  if (doc.contains("noise")) {
    const json& noise = doc.at("noise");
    reject_unknown(noise, "noise", {"sigma", "cutoff"});
    cfg.noise.sigma = read_optional(noise, "sigma", "noise").value_or(0.0);
    if (noise.contains("cutoff")) {
      cfg.noise.cutoff = read_count(noise.at("cutoff"), "noise.cutoff");
    }
    if (!(cfg.noise.sigma >= 0) || cfg.noise.cutoff < 0) {
      fail("noise needs sigma >= 0 and cutoff >= 0");
    }
  }

  if (doc.contains("privacy")) {
    const json& privacy = doc.at("privacy");
    reject_unknown(privacy, "privacy",
                   {"epsilon", "delta", "zeta", "epsilon0", "delta1", "delta2"});
    auto& p = cfg.privacy;
    p.epsilon = read_optional(privacy, "epsilon", "privacy");
    p.delta = read_optional(privacy, "delta", "privacy");
    p.zeta = read_optional(privacy, "zeta", "privacy");
    p.epsilon0 = read_optional(privacy, "epsilon0", "privacy");
    p.delta1 = read_optional(privacy, "delta1", "privacy");
    p.delta2 = read_optional(privacy, "delta2", "privacy");
    const bool any_split = p.epsilon0 || p.delta1 || p.delta2;
    if (any_split && !p.has_split_budget()) {
      fail("privacy split budget needs epsilon0, delta1 and delta2 together");
    }
    if (p.zeta && !(*p.zeta > 0)) fail("privacy.zeta must be > 0");
    for (const auto& d : {p.delta, p.delta1, p.delta2}) {
      if (d && !(*d > 0 && *d < 1)) fail("privacy deltas must lie in (0, 1)");
    }
    for (const auto& e : {p.epsilon, p.epsilon0}) {
      if (e && !(*e >= 0)) fail("privacy epsilons must be >= 0");
    }
  }

  if (doc.contains("sim")) {
    const json& sim = doc.at("sim");
    reject_unknown(sim, "sim", {"horizon", "runs", "burn_in", "window", "seed"});
    if (sim.contains("horizon")) {
      cfg.sim.horizon = read_count(sim.at("horizon"), "sim.horizon");
    }
    if (sim.contains("runs")) cfg.sim.runs = read_count(sim.at("runs"), "sim.runs");
    if (sim.contains("burn_in")) {
      cfg.sim.burn_in = read_count(sim.at("burn_in"), "sim.burn_in");
    }
    if (sim.contains("window")) {
      cfg.sim.window = read_count(sim.at("window"), "sim.window");
    }
    if (sim.contains("seed")) {
      if (!sim.at("seed").is_number_unsigned()) fail("sim.seed must be >= 0");
      cfg.sim.seed = sim.at("seed").get<std::uint64_t>();
    }
    if (cfg.sim.horizon < 1 || cfg.sim.runs < 1) {
      fail("sim.horizon and sim.runs must be >= 1");
    }
  }

  cfg.x0 = Vector::Zero(cfg.plant.state_dim());
  cfg.x_hat0 = Vector::Zero(cfg.plant.state_dim());
  cfg.x_r0 = Vector::Zero(cfg.exo.state_dim());
  if (doc.contains("initial")) {
    const json& initial = doc.at("initial");
    reject_unknown(initial, "initial", {"x0", "x_hat0", "x_r0"});
    if (initial.contains("x0")) cfg.x0 = read_vector(initial.at("x0"), "initial.x0");
    if (initial.contains("x_hat0")) {
      cfg.x_hat0 = read_vector(initial.at("x_hat0"), "initial.x_hat0");
    }
    if (initial.contains("x_r0")) {
      cfg.x_r0 = read_vector(initial.at("x_r0"), "initial.x_r0");
    }
  }
  require_shape(cfg.x0, cfg.plant.state_dim(), 1, "initial.x0");
  require_shape(cfg.x_hat0, cfg.plant.state_dim(), 1, "initial.x_hat0");
  require_shape(cfg.x_r0, cfg.exo.state_dim(), 1, "initial.x_r0");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail("malformed JSON in '" + path + "': " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["plant"] = {{"a", matrix_json(cfg.plant.a)},
                  {"b", matrix_json(cfg.plant.b)},
                  {"c", matrix_json(cfg.plant.c)},
                  {"h_p", matrix_json(cfg.plant.h_p)}};
  doc["exo"] = {{"a_r", matrix_json(cfg.exo.a_r)},
                {"h_r", matrix_json(cfg.exo.h_r)}};
  doc["gains"] = {{"l", matrix_json(cfg.gains.l)},
                  {"k_x", matrix_json(cfg.gains.k_x)}};
  if (!cfg.k_r_derived) doc["gains"]["k_r"] = matrix_json(cfg.gains.k_r);
  doc["quantizer"] = {{"kind", kind_name(cfg.quantizer.kind)},
                      {"d0", cfg.quantizer.schedule.d0},
                      {"d_star", cfg.quantizer.schedule.d_star},
                      {"q", cfg.quantizer.schedule.q}};
  doc["noise"] = {{"sigma", cfg.noise.sigma}, {"cutoff", cfg.noise.cutoff}};
  json privacy = json::object();
  const auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) privacy[key] = *v;
  };
  put("epsilon", cfg.privacy.epsilon);
  put("delta", cfg.privacy.delta);
  put("zeta", cfg.privacy.zeta);
  put("epsilon0", cfg.privacy.epsilon0);
  put("delta1", cfg.privacy.delta1);
  put("delta2", cfg.privacy.delta2);
  doc["privacy"] = privacy;
  doc["sim"] = {{"horizon", cfg.sim.horizon},
                {"runs", cfg.sim.runs},
                {"seed", cfg.sim.seed}};
  if (cfg.sim.burn_in) doc["sim"]["burn_in"] = *cfg.sim.burn_in;
  if (cfg.sim.window) doc["sim"]["window"] = *cfg.sim.window;
  doc["initial"] = {{"x0", vector_json(cfg.x0)},
                    {"x_hat0", vector_json(cfg.x_hat0)},
                    {"x_r0", vector_json(cfg.x_r0)}};
  return doc;
}

SimulationConfig to_simulation_config(const ScenarioConfig& cfg) {
  SimulationConfig sim;
  sim.plant = cfg.plant;
  sim.exo = cfg.exo;
  sim.gains = cfg.gains;
  sim.quantizer = cfg.quantizer.kind;
  sim.schedule = cfg.quantizer.schedule;
  sim.noise = cfg.noise;
  sim.x0 = cfg.x0;
  sim.x_hat0 = cfg.x_hat0;
  sim.x_r0 = cfg.x_r0;
  sim.horizon = cfg.sim.horizon;
  sim.seed = cfg.sim.seed;
  return sim;
}

ScenarioConfig vehicle_scenario(bool dynamic) {
  constexpr double tau = 0.1;
  ScenarioConfig cfg;
  cfg.plant.a.resize(4, 4);
  cfg.plant.a << 1, 0, tau, 0,
                 0, 1, 0, tau,
                 0, 0, 0, 0,
                 0, 0, 0, 0;
  cfg.plant.b.resize(4, 2);
  cfg.plant.b << 0, 0,
                 0, 0,
                 1, 0,
                 0, 1;
  cfg.plant.c.resize(2, 4);
  cfg.plant.c << 1, 0, 0, 0,
                 0, 1, 0, 0;
  cfg.plant.h_p = cfg.plant.c;
  cfg.exo.a_r = Matrix::Identity(2, 2);
  cfg.exo.h_r = Matrix::Identity(2, 2);
  cfg.gains.k_x.resize(2, 4);
  cfg.gains.k_x << -1, 0, -1, 0,
                   0, -1, 0, -1;
  cfg.gains.k_r = Matrix::Identity(2, 2);
  cfg.gains.l.resize(4, 2);
  cfg.gains.l << -0.7238, 0,
                 0, -0.7238,
                 -0.0020, 0,
                 0, -0.0020;

  cfg.noise = NoisePolicy{std::sqrt(5.0), 2};
  cfg.privacy.zeta = 0.1;
  cfg.privacy.epsilon0 = 0.3;
  cfg.privacy.delta1 = 0.05;
  cfg.privacy.delta2 = 0.0461;
  if (dynamic) {
    cfg.quantizer = {QuantizerKind::kDynamic, StepSchedule{10, 0, 0.99}};
    cfg.sim = SimSection{4000, 100, 3000, 1000, 7};
  } else {
    cfg.quantizer = {QuantizerKind::kStatic, StepSchedule::fixed(4)};
    cfg.sim = SimSection{2000, 200, 1000, 1000, 7};
  }
  cfg.x0 = Vector::Zero(4);
  cfg.x_hat0 = Vector::Zero(4);
  cfg.x_r0 = Vector::Constant(2, 10.0);
  return cfg;
}

ScenarioConfig motivating_scenario(QuantizerKind kind) {
  ScenarioConfig cfg;
  cfg.plant = LtiPlant{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 0.2),
                       Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0)};
  cfg.exo = ExoSystem{Matrix::Zero(1, 1), Matrix::Constant(1, 1, 1.0)};
  cfg.gains = FusionCenterGains{Matrix::Constant(1, 1, -1.0),
                                Matrix::Constant(1, 1, 1.0), Matrix::Zero(1, 1)};
  cfg.quantizer = {kind, StepSchedule::fixed(2)};
  cfg.sim = SimSection{1001, 50, 500, 501, 11};
  cfg.x0 = Vector::Constant(1, -0.8);
  cfg.x_hat0 = Vector::Zero(1);
  cfg.x_r0 = Vector::Zero(1);
  return cfg;
}

}  // namespace quantdp::cli
