// Copyright 2026 The platonav Authors
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

#include "platonav/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "platonav/errors.hpp"

namespace platonav {

TaskCost CostConfig::to_task_cost() const {
  TaskCost task;
  task.target_linear_velocity = Vec2(target_speed, 0.0);
  task.target_heading = target_heading;
  task.weight_velocity = weight_velocity;
  task.weight_heading = weight_heading;
  task.weight_angvel = weight_angvel;
  task.weight_control = weight_control;
  task.weight_obstacle = weight_obstacle;
  task.d_safe = d_safe;
  task.hover_control = {Vec2::Zero()};
  return task;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "config line " << line << ": " << what;
  throw ConfigError(msg.str());
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in value of '" + key + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected a number for '" + key + "', got '" + v + "'");
  }
}

long to_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long i = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in value of '" + key + "'");
    return i;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer for '" + key + "', got '" + v + "'");
  }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true/false for '" + key + "', got '" + v + "'");
}

std::vector<std::pair<int, std::string>> parse_switch_schedule(
    const std::string& v, int line) {
  std::vector<std::pair<int, std::string>> schedule;
  if (v.empty()) return schedule;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      fail(line, "switch_schedule items must look like '<iteration>:<generator>'");
    }
    const int iter = static_cast<int>(to_int(trim(item.substr(0, colon)), line,
                                             "switch_schedule"));
    const std::string gen = trim(item.substr(colon + 1));
    if (gen != "canyon" && gen != "forest" && gen != "empty") {
      fail(line, "switch_schedule generator must be canyon|forest|empty");
    }
    if (!schedule.empty() && iter <= schedule.back().first) {
      fail(line, "switch_schedule iterations must be ascending");
    }
    schedule.push_back({iter, gen});
  }
  return schedule;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw = raw.substr(0, comment);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "experiment" && section != "environment" &&
          section != "cost" && section != "mpc" && section != "policy") {
        fail(line, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "experiment") {
      if (key == "method") cfg.method = value;
      else if (key == "iterations") cfg.iterations = static_cast<int>(to_int(value, line, key));
      else if (key == "steps_per_iteration") cfg.steps_per_iteration = static_cast<int>(to_int(value, line, key));
      else if (key == "master_seed") cfg.master_seed = static_cast<std::uint64_t>(to_int(value, line, key));
      else if (key == "eval_episodes") cfg.eval_episodes = static_cast<int>(to_int(value, line, key));
      else if (key == "eval_max_steps") cfg.eval_max_steps = static_cast<int>(to_int(value, line, key));
      else if (key == "observation_mode") cfg.observation_mode = value;
      else if (key == "beta_schedule") cfg.beta_schedule = value;
      else if (key == "epsilon_kl") cfg.epsilon_kl = to_double(value, line, key);
      else fail(line, "unknown key '" + key + "' in section [experiment]");
    } else if (section == "environment") {
      if (key == "generator") cfg.env.generator = value;
      else if (key == "dt") cfg.env.dt = to_double(value, line, key);
      else if (key == "control_noise") cfg.env.control_noise = to_double(value, line, key);
      else if (key == "laser_beams") cfg.env.sensors.laser_beams = static_cast<int>(to_int(value, line, key));
      else if (key == "laser_fan_angle") cfg.env.sensors.laser_fan_angle = to_double(value, line, key);
      else if (key == "laser_max_range") cfg.env.sensors.laser_max_range = to_double(value, line, key);
      else if (key == "laser_noise") cfg.env.sensors.laser_noise = to_double(value, line, key);
      else if (key == "motion_noise") cfg.env.sensors.motion_noise = to_double(value, line, key);
      else if (key == "vehicle_radius") cfg.env.vehicle_radius = to_double(value, line, key);
      else if (key == "thrust_limit") {
        const double lim = to_double(value, line, key);
        cfg.env.control_bounds.lo.x() = -lim;
        cfg.env.control_bounds.hi.x() = lim;
      } else if (key == "torque_limit") {
        const double lim = to_double(value, line, key);
        cfg.env.control_bounds.lo.y() = -lim;
        cfg.env.control_bounds.hi.y() = lim;
      }
      else if (key == "switch_schedule") cfg.env.switch_schedule = parse_switch_schedule(value, line);
      else if (key == "canyon_length") cfg.env.canyon.length = to_double(value, line, key);
      else if (key == "canyon_width") cfg.env.canyon.width = to_double(value, line, key);
      else if (key == "canyon_max_turn") cfg.env.canyon.max_turn = to_double(value, line, key);
      else if (key == "canyon_segment_length") cfg.env.canyon.segment_length = to_double(value, line, key);
      else if (key == "canyon_heading_limit") cfg.env.canyon.heading_limit = to_double(value, line, key);
      else if (key == "forest_extent") cfg.env.forest.extent = to_double(value, line, key);
      else if (key == "tree_radius") cfg.env.forest.tree_radius = to_double(value, line, key);
      else if (key == "tree_spacing") cfg.env.forest.avg_spacing = to_double(value, line, key);
      else if (key == "tree_min_gap") cfg.env.forest.min_gap = to_double(value, line, key);
      else if (key == "spawn_clear_radius") cfg.env.forest.spawn_clear_radius = to_double(value, line, key);
      else fail(line, "unknown key '" + key + "' in section [environment]");
    } else if (section == "cost") {
      if (key == "target_speed") cfg.cost.target_speed = to_double(value, line, key);
      else if (key == "target_heading") cfg.cost.target_heading = to_double(value, line, key);
      else if (key == "weight_velocity") cfg.cost.weight_velocity = to_double(value, line, key);
      else if (key == "weight_heading") cfg.cost.weight_heading = to_double(value, line, key);
      else if (key == "weight_angvel") cfg.cost.weight_angvel = to_double(value, line, key);
      else if (key == "weight_control") cfg.cost.weight_control = to_double(value, line, key);
      else if (key == "weight_obstacle") cfg.cost.weight_obstacle = to_double(value, line, key);
      else if (key == "d_safe") cfg.cost.d_safe = to_double(value, line, key);
      else if (key == "cost_scale") cfg.cost.cost_scale = to_double(value, line, key);
      else if (key == "terminal_weight") cfg.cost.terminal_weight = to_double(value, line, key);
      else if (key == "command_conditioned") cfg.cost.command_conditioned = to_bool(value, line, key);
      else if (key == "command_tolerance") cfg.cost.command_tolerance = to_double(value, line, key);
      else if (key == "command_forward_min") cfg.cost.command_forward_min = to_double(value, line, key);
      else if (key == "command_forward_max") cfg.cost.command_forward_max = to_double(value, line, key);
      else if (key == "command_side") cfg.cost.command_side = to_double(value, line, key);
      else fail(line, "unknown key '" + key + "' in section [cost]");
    } else if (section == "mpc") {
      if (key == "horizon") cfg.mpc.horizon = static_cast<int>(to_int(value, line, key));
      else if (key == "lambda") cfg.mpc.lambda = to_double(value, line, key);
      else if (key == "temperature") cfg.mpc.temperature = to_double(value, line, key);
      else if (key == "max_iterations") cfg.mpc.max_iterations = static_cast<int>(to_int(value, line, key));
      else if (key == "tolerance") cfg.mpc.tolerance = to_double(value, line, key);
      else if (key == "reg_init") cfg.mpc.reg_init = to_double(value, line, key);
      else if (key == "reg_max") cfg.mpc.reg_max = to_double(value, line, key);
      else if (key == "linesearch_shrink") cfg.mpc.linesearch_shrink = to_double(value, line, key);
      else if (key == "linesearch_trials") cfg.mpc.linesearch_trials = static_cast<int>(to_int(value, line, key));
      else if (key == "fd_epsilon") cfg.mpc.fd_epsilon = to_double(value, line, key);
      else fail(line, "unknown key '" + key + "' in section [mpc]");
    } else if (section == "policy") {
      if (key == "hidden_units") cfg.policy.hidden_units = static_cast<int>(to_int(value, line, key));
      else if (key == "learning_rate") cfg.policy.learning_rate = to_double(value, line, key);
      else if (key == "batch_size") cfg.policy.batch_size = static_cast<int>(to_int(value, line, key));
      else if (key == "epochs") cfg.policy.epochs = static_cast<int>(to_int(value, line, key));
      else if (key == "init_covariance") cfg.policy.init_covariance = to_double(value, line, key);
      else if (key == "fixed_covariance") cfg.policy.fixed_covariance = to_double(value, line, key);
      else fail(line, "unknown key '" + key + "' in section [policy]");
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  const auto check = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config field " + what);
  };
  check(cfg.method == "plato" || cfg.method == "dagger" ||
            cfg.method == "coaching" || cfg.method == "supervised",
        "method: must be plato|dagger|coaching|supervised");
  check(cfg.iterations >= 0, "iterations: must be >= 0");
  check(cfg.steps_per_iteration >= 1, "steps_per_iteration: must be >= 1");
  check(cfg.eval_episodes >= 1, "eval_episodes: must be >= 1");
  check(cfg.eval_max_steps >= 1, "eval_max_steps: must be >= 1");
  check(cfg.observation_mode == "laser" || cfg.observation_mode == "full-state",
        "observation_mode: must be laser|full-state");
  check(cfg.beta_schedule == "linear-full" || cfg.beta_schedule == "linear-half" ||
            cfg.beta_schedule == "linear-quarter" || cfg.beta_schedule == "one-zero",
        "beta_schedule: must be linear-full|linear-half|linear-quarter|one-zero");
  check(cfg.epsilon_kl > 0.0, "epsilon_kl: must be > 0");
  check(cfg.env.generator == "forest" || cfg.env.generator == "canyon" ||
            cfg.env.generator == "empty",
        "generator: must be forest|canyon|empty");
  check(cfg.env.dt > 0.0 && cfg.env.dt <= 0.1, "dt: must be in (0, 0.1]");
  check(cfg.env.control_noise >= 0.0, "control_noise: must be >= 0");
  check(cfg.env.sensors.laser_beams >= 1, "laser_beams: must be >= 1");
  check(cfg.env.sensors.laser_fan_angle > 0.0, "laser_fan_angle: must be > 0");
  check(cfg.env.sensors.laser_max_range > 0.0, "laser_max_range: must be > 0");
  check(cfg.env.sensors.laser_noise >= 0.0, "laser_noise: must be >= 0");
  check(cfg.env.sensors.motion_noise >= 0.0, "motion_noise: must be >= 0");
  check(cfg.env.vehicle_radius > 0.0, "vehicle_radius: must be > 0");
  check(cfg.env.control_bounds.hi.x() > 0.0, "thrust_limit: must be > 0");
  check(cfg.env.control_bounds.hi.y() > 0.0, "torque_limit: must be > 0");
  check(cfg.env.canyon.width > 2.0 * cfg.env.vehicle_radius,
        "canyon_width: must exceed the vehicle diameter");
  check(cfg.env.canyon.segment_length > 0.0, "canyon_segment_length: must be > 0");
  check(cfg.env.canyon.max_turn >= 0.0, "canyon_max_turn: must be >= 0");
  check(cfg.env.forest.avg_spacing > 2.0 * cfg.env.forest.tree_radius,
        "tree_spacing: must exceed the tree diameter");
  check(cfg.env.forest.tree_radius > 0.0, "tree_radius: must be > 0");
  for (const auto& [iter, gen] : cfg.env.switch_schedule) {
    check(iter >= 1, "switch_schedule: iterations are 1-based");
    (void)gen;
  }
  check(cfg.cost.weight_velocity >= 0.0 && cfg.cost.weight_heading >= 0.0 &&
            cfg.cost.weight_angvel >= 0.0 && cfg.cost.weight_control >= 0.0 &&
            cfg.cost.weight_obstacle >= 0.0,
        "cost weights: must be >= 0");
  check(cfg.cost.d_safe > 0.0, "d_safe: must be > 0");
  check(cfg.cost.cost_scale > 0.0, "cost_scale: must be > 0");
  check(cfg.cost.terminal_weight >= 0.0, "terminal_weight: must be >= 0");
  check(cfg.cost.command_tolerance > 0.0, "command_tolerance: must be > 0");
  check(cfg.mpc.horizon >= 1, "horizon: must be >= 1");
  check(cfg.mpc.lambda >= 0.0, "lambda: must be >= 0");
  check(cfg.mpc.temperature > 0.0, "temperature: must be > 0");
  check(cfg.mpc.max_iterations >= 1, "max_iterations: must be >= 1");
  check(cfg.mpc.tolerance > 0.0, "tolerance: must be > 0");
  check(cfg.mpc.reg_init > 0.0 && cfg.mpc.reg_max >= cfg.mpc.reg_init,
        "reg bounds: must satisfy 0 < reg_init <= reg_max");
  check(cfg.mpc.linesearch_shrink > 0.0 && cfg.mpc.linesearch_shrink < 1.0,
        "linesearch_shrink: must be in (0, 1)");
  check(cfg.mpc.linesearch_trials >= 1, "linesearch_trials: must be >= 1");
  check(cfg.mpc.fd_epsilon > 0.0, "fd_epsilon: must be > 0");
  check(cfg.policy.hidden_units >= 1, "hidden_units: must be >= 1");
  check(cfg.policy.learning_rate > 0.0, "learning_rate: must be > 0");
  check(cfg.policy.batch_size >= 1, "batch_size: must be >= 1");
  check(cfg.policy.epochs >= 1, "epochs: must be >= 1");
  check(cfg.policy.init_covariance > 0.0, "init_covariance: must be > 0");
  check(cfg.policy.fixed_covariance >= 0.0, "fixed_covariance: must be >= 0");
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto d = format_double;
  out << "[experiment]\n";
  out << "method = " << c.method << "\n";
  out << "iterations = " << c.iterations << "\n";
  out << "steps_per_iteration = " << c.steps_per_iteration << "\n";
  out << "master_seed = " << c.master_seed << "\n";
  out << "eval_episodes = " << c.eval_episodes << "\n";
  out << "eval_max_steps = " << c.eval_max_steps << "\n";
  out << "observation_mode = " << c.observation_mode << "\n";
  out << "beta_schedule = " << c.beta_schedule << "\n";
  out << "epsilon_kl = " << d(c.epsilon_kl) << "\n";
  out << "\n[environment]\n";
  out << "generator = " << c.env.generator << "\n";
  out << "dt = " << d(c.env.dt) << "\n";
  out << "control_noise = " << d(c.env.control_noise) << "\n";
  out << "laser_beams = " << c.env.sensors.laser_beams << "\n";
  out << "laser_fan_angle = " << d(c.env.sensors.laser_fan_angle) << "\n";
  out << "laser_max_range = " << d(c.env.sensors.laser_max_range) << "\n";
  out << "laser_noise = " << d(c.env.sensors.laser_noise) << "\n";
  out << "motion_noise = " << d(c.env.sensors.motion_noise) << "\n";
  out << "vehicle_radius = " << d(c.env.vehicle_radius) << "\n";
  out << "thrust_limit = " << d(c.env.control_bounds.hi.x()) << "\n";
  out << "torque_limit = " << d(c.env.control_bounds.hi.y()) << "\n";
  out << "switch_schedule = ";
  for (std::size_t i = 0; i < c.env.switch_schedule.size(); ++i) {
    if (i > 0) out << ",";
    out << c.env.switch_schedule[i].first << ":" << c.env.switch_schedule[i].second;
  }
  out << "\n";
  out << "canyon_length = " << d(c.env.canyon.length) << "\n";
  out << "canyon_width = " << d(c.env.canyon.width) << "\n";
  out << "canyon_max_turn = " << d(c.env.canyon.max_turn) << "\n";
  out << "canyon_segment_length = " << d(c.env.canyon.segment_length) << "\n";
  out << "canyon_heading_limit = " << d(c.env.canyon.heading_limit) << "\n";
  out << "forest_extent = " << d(c.env.forest.extent) << "\n";
  out << "tree_radius = " << d(c.env.forest.tree_radius) << "\n";
  out << "tree_spacing = " << d(c.env.forest.avg_spacing) << "\n";
  out << "tree_min_gap = " << d(c.env.forest.min_gap) << "\n";
  out << "spawn_clear_radius = " << d(c.env.forest.spawn_clear_radius) << "\n";
  out << "\n[cost]\n";
  out << "target_speed = " << d(c.cost.target_speed) << "\n";
  out << "target_heading = " << d(c.cost.target_heading) << "\n";
  out << "weight_velocity = " << d(c.cost.weight_velocity) << "\n";
  out << "weight_heading = " << d(c.cost.weight_heading) << "\n";
  out << "weight_angvel = " << d(c.cost.weight_angvel) << "\n";
  out << "weight_control = " << d(c.cost.weight_control) << "\n";
  out << "weight_obstacle = " << d(c.cost.weight_obstacle) << "\n";
  out << "d_safe = " << d(c.cost.d_safe) << "\n";
  out << "cost_scale = " << d(c.cost.cost_scale) << "\n";
  out << "terminal_weight = " << d(c.cost.terminal_weight) << "\n";
  out << "command_conditioned = " << (c.cost.command_conditioned ? "true" : "false") << "\n";
  out << "command_tolerance = " << d(c.cost.command_tolerance) << "\n";
  out << "command_forward_min = " << d(c.cost.command_forward_min) << "\n";
  out << "command_forward_max = " << d(c.cost.command_forward_max) << "\n";
  out << "command_side = " << d(c.cost.command_side) << "\n";
  out << "\n[mpc]\n";
  out << "horizon = " << c.mpc.horizon << "\n";
  out << "lambda = " << d(c.mpc.lambda) << "\n";
  out << "temperature = " << d(c.mpc.temperature) << "\n";
  out << "max_iterations = " << c.mpc.max_iterations << "\n";
  out << "tolerance = " << d(c.mpc.tolerance) << "\n";
  out << "reg_init = " << d(c.mpc.reg_init) << "\n";
  out << "reg_max = " << d(c.mpc.reg_max) << "\n";
  out << "linesearch_shrink = " << d(c.mpc.linesearch_shrink) << "\n";
  out << "linesearch_trials = " << c.mpc.linesearch_trials << "\n";
  out << "fd_epsilon = " << d(c.mpc.fd_epsilon) << "\n";
  out << "\n[policy]\n";
  out << "hidden_units = " << c.policy.hidden_units << "\n";
  out << "learning_rate = " << d(c.policy.learning_rate) << "\n";
  out << "batch_size = " << c.policy.batch_size << "\n";
  out << "epochs = " << c.policy.epochs << "\n";
  out << "init_covariance = " << d(c.policy.init_covariance) << "\n";
  out << "fixed_covariance = " << d(c.policy.fixed_covariance) << "\n";
  return out.str();
}

}  // namespace platonav
