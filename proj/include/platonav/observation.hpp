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

#ifndef PLATONAV_OBSERVATION_HPP_
#define PLATONAV_OBSERVATION_HPP_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "platonav/vehicle.hpp"
#include "platonav/world.hpp"

namespace platonav {

struct SensorConfig {
  int laser_beams = 15;
  double laser_fan_angle = 3.14159265358979323846;  // 180 degree fan
  double laser_max_range = 5.0;
  double laser_noise = 0.05;   // additive std (m), ranges re-clipped after
  double motion_noise = 0.01;  // additive std on velocity/heading channels
  bool full_state = false;     // observation = full state (oracle mode)
};

// What the learner sees. Laser mode flattens to
// [ranges..., vx, vy, omega, heading, (cmd_x, cmd_y)]; full-state mode to
// [px, py, heading, vx, vy, omega, (cmd_x, cmd_y)].
struct Observation {
  std::vector<double> laser_ranges;
  Vec2 linear_velocity = Vec2::Zero();
  double angular_velocity = 0.0;
  double heading = 0.0;
  std::optional<Vec2> commanded_velocity;
  std::optional<Vec2> position;  // full-state mode only

  Eigen::VectorXd flatten() const;
};

// Observation dimension for a given configuration.
int observation_dim(const SensorConfig& sensors, bool command_conditioned);

// Casts the laser fan and applies per-channel sensor noise from `rng`.
Observation observe(const ObstacleField& field, const VehicleState& x,
                    const SensorConfig& sensors,
                    const std::optional<Vec2>& commanded_velocity, Rng& rng);

}  // namespace platonav

#endif  // PLATONAV_OBSERVATION_HPP_
