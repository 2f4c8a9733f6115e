// Copyright 2026 The snakegait Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "snakegait/baseline.hpp"
#include "snakegait/costs.hpp"
#include "snakegait/environments.hpp"
#include "snakegait/mpc.hpp"

// Experiment configuration: JSON with nested sections that mirror the
// library types. Missing keys keep their defaults; unknown keys are errors.
namespace snakegait::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateSpec {
  std::string controller = "serpenoid";  // "zero" or "serpenoid"
  SerpenoidParams serpenoid;
};

struct ExperimentConfig {
  SnakeParams snake;
  env::EnvironmentModel environment = env::SmoothDry{};
  CostSpec cost;
  MPCConfig mpc;
  GridSpec grid;
  EvaluationProtocol protocol;
  SimulateSpec simulate;
  std::vector<double> robustness_deltas = {0.05, 0.25};
  std::string output_dir = "out";

  void validate() const {
    snake.validate();
    env::validate(environment);
    cost.validate();
    mpc.validate();
    grid.validate();
    simulate.serpenoid.validate();
    if (simulate.controller != "zero" && simulate.controller != "serpenoid") {
      throw std::invalid_argument("simulate.controller must be zero or serpenoid");
    }
    if (!(protocol.duration > 0.0) || !(protocol.window_start >= 0.0) ||
        !(protocol.window_start < protocol.duration)) {
      throw std::invalid_argument("protocol needs 0 <= window_start < duration");
    }
    if (!(protocol.forward.norm() > 0.0)) {
      throw std::invalid_argument("protocol.forward must be nonzero");
    }
  }
};

namespace detail {

inline void check_keys(const Json& j, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) {
      throw ConfigError("unknown key '" + where + "." + it.key() + "'");
    }
  }
}

template <class T>
void read(const Json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

inline void read_vec2(const Json& j, const char* key, const std::string& where,
                      Vec2& out) {
  if (!j.contains(key)) return;
  std::vector<double> v;
  read(j, key, where, v);
  if (v.size() != 2) throw ConfigError("'" + where + "." + key + "' needs 2 numbers");
  out = Vec2(v[0], v[1]);
}

inline Json vec2(const Vec2& v) { return Json::array({v.x(), v.y()}); }

inline Integrator integrator_from(const std::string& s, const std::string& where) {
  if (s == "euler") return Integrator::Euler;
  if (s == "rk4") return Integrator::RK4;
  throw ConfigError("'" + where + "' must be euler or rk4");
}

inline std::string integrator_name(Integrator i) {
  return i == Integrator::Euler ? "euler" : "rk4";
}

inline void read_integrator(const Json& j, const char* key, const std::string& where,
                            Integrator& out) {
  if (!j.contains(key)) return;
  std::string s;
  read(j, key, where, s);
  out = integrator_from(s, where + "." + key);
}

inline void read_range(const Json& j, const char* key, const std::string& where,
                       GridRange& r) {
  if (!j.contains(key)) return;
  const std::string w = where + "." + key;
  check_keys(j.at(key), w, {"min", "max", "interval"});
  read(j.at(key), "min", w, r.min);
  read(j.at(key), "max", w, r.max);
  read(j.at(key), "interval", w, r.interval);
}

inline Json range(const GridRange& r) {
  return Json{{"min", r.min}, {"max", r.max}, {"interval", r.interval}};
}

inline void read_snake(const Json& j, SnakeParams& p) {
  check_keys(j, "snake", {"n_links", "link_length", "link_mass", "cross_height",
                          "cross_width", "joint_viscous_coeff", "torque_limit",
                          "gravity", "dt"});
  read(j, "n_links", "snake", p.n_links);
  read(j, "link_length", "snake", p.link_length);
  read(j, "link_mass", "snake", p.link_mass);
  read(j, "cross_height", "snake", p.cross_height);
  read(j, "cross_width", "snake", p.cross_width);
  read(j, "joint_viscous_coeff", "snake", p.joint_viscous_coeff);
  read(j, "torque_limit", "snake", p.torque_limit);
  read(j, "gravity", "snake", p.gravity);
  read(j, "dt", "snake", p.dt);
}

inline Json write_snake(const SnakeParams& p) {
  return Json{{"n_links", p.n_links},
              {"link_length", p.link_length},
              {"link_mass", p.link_mass},
              {"cross_height", p.cross_height},
              {"cross_width", p.cross_width},
              {"joint_viscous_coeff", p.joint_viscous_coeff},
              {"torque_limit", p.torque_limit},
              {"gravity", p.gravity},
              {"dt", p.dt}};
}

inline env::EnvironmentModel read_environment(const Json& j) {
  const std::string w = "environment";
  if (!j.is_object() || !j.contains("type")) {
    throw ConfigError("'environment' needs a 'type'");
  }
  std::string type;
  read(j, "type", w, type);
  if (type == "box") {
    check_keys(j, w, {"type", "mu_l", "mu_t", "sign_smoothing"});
    env::BoxDry m;
    read(j, "mu_l", w, m.mu_l);
    read(j, "mu_t", w, m.mu_t);
    read(j, "sign_smoothing", w, m.sign_smoothing);
    return m;
  }
  if (type == "dry") {
    check_keys(j, w, {"type", "mu_l", "mu_t", "regularization"});
    env::SmoothDry m;
    read(j, "mu_l", w, m.mu_l);
    read(j, "mu_t", w, m.mu_t);
    read(j, "regularization", w, m.regularization);
    return m;
  }
  if (type == "viscous") {
    check_keys(j, w, {"type", "c_l", "c_t"});
    env::Viscous m;
    read(j, "c_l", w, m.c_l);
    read(j, "c_t", w, m.c_t);
    return m;
  }
  if (type == "fluid") {
    check_keys(j, w, {"type", "density", "c_d", "c_f", "c_a", "in_plane_gravity",
                      "sign_smoothing"});
    env::Fluid m;
    read(j, "density", w, m.density);
    read(j, "c_d", w, m.c_d);
    read(j, "c_f", w, m.c_f);
    read(j, "c_a", w, m.c_a);
    read(j, "in_plane_gravity", w, m.in_plane_gravity);
    read(j, "sign_smoothing", w, m.sign_smoothing);
    return m;
  }
  throw ConfigError("environment.type must be box, dry, viscous or fluid");
}

inline Json write_environment(const env::EnvironmentModel& model) {
  Json j{{"type", std::string(env::name(model))}};
  std::visit(
      [&j](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, env::BoxDry>) {
          j["mu_l"] = m.mu_l;
          j["mu_t"] = m.mu_t;
          j["sign_smoothing"] = m.sign_smoothing;
        } else if constexpr (std::is_same_v<M, env::SmoothDry>) {
          j["mu_l"] = m.mu_l;
          j["mu_t"] = m.mu_t;
          j["regularization"] = m.regularization;
        } else if constexpr (std::is_same_v<M, env::Viscous>) {
          j["c_l"] = m.c_l;
          j["c_t"] = m.c_t;
        } else {
          j["density"] = m.density;
          j["c_d"] = m.c_d;
          j["c_f"] = m.c_f;
          j["c_a"] = m.c_a;
          j["in_plane_gravity"] = m.in_plane_gravity;
          j["sign_smoothing"] = m.sign_smoothing;
        }
      },
      model);
  return j;
}

inline void read_cost(const Json& j, CostSpec& c) {
  const std::string w = "cost";
  check_keys(j, w, {"goal", "alpha", "beta", "obstacles", "obstacle_amplitude",
                    "obstacle_steepness", "goal_smoothing_eps"});
  read_vec2(j, "goal", w, c.goal);
  read(j, "alpha", w, c.alpha);
  read(j, "beta", w, c.beta);
  read(j, "obstacle_amplitude", w, c.obstacle_amplitude);
  read(j, "obstacle_steepness", w, c.obstacle_steepness);
  read(j, "goal_smoothing_eps", w, c.goal_smoothing_eps);
  if (j.contains("obstacles")) {
    if (!j.at("obstacles").is_array()) throw ConfigError("'cost.obstacles' must be a list");
    c.obstacles.clear();
    for (const Json& o : j.at("obstacles")) {
      const std::string ow = "cost.obstacles[]";
      check_keys(o, ow, {"center", "radius"});
      Obstacle obs;
      read_vec2(o, "center", ow, obs.center);
      read(o, "radius", ow, obs.radius);
      c.obstacles.push_back(obs);
    }
  }
}

inline Json write_cost(const CostSpec& c) {
  Json obstacles = Json::array();
  for (const Obstacle& o : c.obstacles) {
    obstacles.push_back(Json{{"center", vec2(o.center)}, {"radius", o.radius}});
  }
  return Json{{"goal", vec2(c.goal)},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"obstacles", obstacles},
              {"obstacle_amplitude", c.obstacle_amplitude},
              {"obstacle_steepness", c.obstacle_steepness},
              {"goal_smoothing_eps", c.goal_smoothing_eps}};
}

inline void read_ilqr(const Json& j, ILQRConfig& c) {
  const std::string w = "mpc.ilqr";
  check_keys(j, w, {"horizon", "max_iterations", "fd_epsilon", "reg_init",
                    "reg_min", "reg_max", "reg_scale", "line_search_alphas",
                    "cost_tolerance", "integrator"});
  read(j, "horizon", w, c.horizon);
  read(j, "max_iterations", w, c.max_iterations);
  read(j, "fd_epsilon", w, c.fd_epsilon);
  read(j, "reg_init", w, c.reg_init);
  read(j, "reg_min", w, c.reg_min);
  read(j, "reg_max", w, c.reg_max);
  read(j, "reg_scale", w, c.reg_scale);
  read(j, "line_search_alphas", w, c.line_search_alphas);
  read(j, "cost_tolerance", w, c.cost_tolerance);
  read_integrator(j, "integrator", w, c.integrator);
}

inline Json write_ilqr(const ILQRConfig& c) {
  return Json{{"horizon", c.horizon},
              {"max_iterations", c.max_iterations},
              {"fd_epsilon", c.fd_epsilon},
              {"reg_init", c.reg_init},
              {"reg_min", c.reg_min},
              {"reg_max", c.reg_max},
              {"reg_scale", c.reg_scale},
              {"line_search_alphas", c.line_search_alphas},
              {"cost_tolerance", c.cost_tolerance},
              {"integrator", integrator_name(c.integrator)}};
}

inline void read_mpc(const Json& j, MPCConfig& c) {
  const std::string w = "mpc";
  check_keys(j, w, {"ilqr", "apply_steps", "total_steps", "eval_integrator",
                    "cold_start_torque", "cold_start_frequency", "cold_start_phase"});
  if (j.contains("ilqr")) read_ilqr(j.at("ilqr"), c.ilqr);
  read(j, "apply_steps", w, c.apply_steps);
  read(j, "total_steps", w, c.total_steps);
  read_integrator(j, "eval_integrator", w, c.eval_integrator);
  read(j, "cold_start_torque", w, c.cold_start_torque);
  read(j, "cold_start_frequency", w, c.cold_start_frequency);
  read(j, "cold_start_phase", w, c.cold_start_phase);
}

inline Json write_mpc(const MPCConfig& c) {
  return Json{{"ilqr", write_ilqr(c.ilqr)},
              {"apply_steps", c.apply_steps},
              {"total_steps", c.total_steps},
              {"eval_integrator", integrator_name(c.eval_integrator)},
              {"cold_start_torque", c.cold_start_torque},
              {"cold_start_frequency", c.cold_start_frequency},
              {"cold_start_phase", c.cold_start_phase}};
}

inline void read_serpenoid(const Json& j, const std::string& w, SerpenoidParams& g) {
  check_keys(j, w, {"amplitude", "frequency", "phase_offset", "bias", "kp", "kd"});
  read(j, "amplitude", w, g.amplitude);
  read(j, "frequency", w, g.frequency);
  read(j, "phase_offset", w, g.phase_offset);
  read(j, "bias", w, g.bias);
  read(j, "kp", w, g.kp);
  read(j, "kd", w, g.kd);
}

inline Json write_serpenoid(const SerpenoidParams& g) {
  return Json{{"amplitude", g.amplitude}, {"frequency", g.frequency},
              {"phase_offset", g.phase_offset}, {"bias", g.bias},
              {"kp", g.kp}, {"kd", g.kd}};
}

inline void read_grid(const Json& j, GridSpec& g) {
  const std::string w = "grid";
  check_keys(j, w, {"frequency", "amplitude", "phase_offset", "kp", "kd", "bias"});
  read_range(j, "frequency", w, g.frequency);
  read_range(j, "amplitude", w, g.amplitude);
  read_range(j, "phase_offset", w, g.phase_offset);
  read_range(j, "kp", w, g.kp);
  read_range(j, "kd", w, g.kd);
  read(j, "bias", w, g.bias);
}

inline Json write_grid(const GridSpec& g) {
  return Json{{"frequency", range(g.frequency)}, {"amplitude", range(g.amplitude)},
              {"phase_offset", range(g.phase_offset)}, {"kp", range(g.kp)},
              {"kd", range(g.kd)}, {"bias", g.bias}};
}

inline void read_protocol(const Json& j, EvaluationProtocol& p) {
  const std::string w = "protocol";
  check_keys(j, w, {"duration", "window_start", "forward", "power", "speed"});
  read(j, "duration", w, p.duration);
  read(j, "window_start", w, p.window_start);
  read_vec2(j, "forward", w, p.forward);
  if (j.contains("power")) {
    std::string s;
    read(j, "power", w, s);
    if (s == "absolute") p.metrics.power = PowerMode::Absolute;
    else if (s == "signed") p.metrics.power = PowerMode::Signed;
    else throw ConfigError("'protocol.power' must be absolute or signed");
  }
  if (j.contains("speed")) {
    std::string s;
    read(j, "speed", w, s);
    if (s == "head") p.metrics.speed = SpeedMode::Head;
    else if (s == "com") p.metrics.speed = SpeedMode::CenterOfMass;
    else throw ConfigError("'protocol.speed' must be head or com");
  }
}

inline Json write_protocol(const EvaluationProtocol& p) {
  return Json{{"duration", p.duration},
              {"window_start", p.window_start},
              {"forward", vec2(p.forward)},
              {"power", p.metrics.power == PowerMode::Absolute ? "absolute" : "signed"},
              {"speed", p.metrics.speed == SpeedMode::Head ? "head" : "com"}};
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  using namespace detail;
  check_keys(j, "config", {"snake", "environment", "cost", "mpc", "grid",
                           "protocol", "simulate", "robustness_deltas",
                           "output_dir"});
  ExperimentConfig c;
  if (j.contains("snake")) read_snake(j.at("snake"), c.snake);
  if (j.contains("environment")) c.environment = read_environment(j.at("environment"));
  if (j.contains("cost")) read_cost(j.at("cost"), c.cost);
  if (j.contains("mpc")) read_mpc(j.at("mpc"), c.mpc);
  if (j.contains("grid")) read_grid(j.at("grid"), c.grid);
  if (j.contains("protocol")) read_protocol(j.at("protocol"), c.protocol);
  if (j.contains("simulate")) {
    const Json& s = j.at("simulate");
    check_keys(s, "simulate", {"controller", "serpenoid"});
    read(s, "controller", "simulate", c.simulate.controller);
    if (s.contains("serpenoid")) {
      read_serpenoid(s.at("serpenoid"), "simulate.serpenoid", c.simulate.serpenoid);
    }
  }
  read(j, "robustness_deltas", "config", c.robustness_deltas);
  read(j, "output_dir", "config", c.output_dir);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// The fully resolved configuration, defaults included. The output directory
// is where files go rather than what they contain, so it is left out.
inline Json to_json(const ExperimentConfig& c) {
  using namespace detail;
  return Json{{"snake", write_snake(c.snake)},
              {"environment", write_environment(c.environment)},
              {"cost", write_cost(c.cost)},
              {"mpc", write_mpc(c.mpc)},
              {"grid", write_grid(c.grid)},
              {"protocol", write_protocol(c.protocol)},
              {"simulate", Json{{"controller", c.simulate.controller},
                                {"serpenoid", write_serpenoid(c.simulate.serpenoid)}}},
              {"robustness_deltas", c.robustness_deltas}};
}

}  // namespace snakegait::cli
