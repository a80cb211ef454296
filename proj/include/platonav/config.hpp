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

#ifndef PLATONAV_CONFIG_HPP_
#define PLATONAV_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "platonav/costs.hpp"
#include "platonav/observation.hpp"
#include "platonav/trajopt.hpp"
#include "platonav/vehicle.hpp"
#include "platonav/world.hpp"

namespace platonav {

struct EnvironmentConfig {
  std::string generator = "forest";  // forest | canyon | empty
  double dt = 0.05;
  double control_noise = 0.05;
  SensorConfig sensors;
  double vehicle_radius = 0.25;
  ControlBounds control_bounds;
  CanyonParams canyon;
  ForestParams forest;
  // Optional (iteration -> generator) switch points, 1-based, ascending.
  std::vector<std::pair<int, std::string>> switch_schedule;
};

struct CostConfig {
  double target_speed = 1.5;  // target velocity is (target_speed, 0)
  double target_heading = 0.0;
  double weight_velocity = 1e3;
  double weight_heading = 1e4;
  double weight_angvel = 250.0;
  double weight_control = 0.008;
  double weight_obstacle = 1e3;
  double d_safe = 1.0;
  double cost_scale = 200.0;     // squash scale for the normalized cost
  double terminal_weight = 5.0;  // horizon-end state-cost multiplier
  bool command_conditioned = false;
  double command_tolerance = 0.1;
  double command_forward_min = 1.0;
  double command_forward_max = 2.5;
  double command_side = 1.0;

  TaskCost to_task_cost() const;
};

struct PolicyTrainConfig {
  int hidden_units = 40;
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 200;
  double init_covariance = 0.25;
  // 0 fits the covariance from label precisions each iteration; > 0 keeps
  // a fixed value * identity.
  double fixed_covariance = 0.0;
};

struct ExperimentConfig {
  std::string method = "plato";  // plato | dagger | coaching | supervised
  int iterations = 15;
  int steps_per_iteration = 400;
  std::uint64_t master_seed = 1;
  int eval_episodes = 10;
  int eval_max_steps = 600;
  std::string observation_mode = "laser";  // laser | full-state
  std::string beta_schedule = "linear-full";
  double epsilon_kl = 3.0;  // monitored per-step KL bound

  EnvironmentConfig env;
  CostConfig cost;
  MpcConfig mpc;
  PolicyTrainConfig policy;
};

// Structured key-value text with [sections]; '#' starts a comment. Unknown
// sections or keys are errors with line diagnostics, as are out-of-range
// values. parse(serialize(c)) == c holds exactly.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

}  // namespace platonav

#endif  // PLATONAV_CONFIG_HPP_
