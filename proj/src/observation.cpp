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

#include "platonav/observation.hpp"

#include <algorithm>

namespace platonav {

Eigen::VectorXd Observation::flatten() const {
  const int base = position.has_value()
                       ? 6
                       : static_cast<int>(laser_ranges.size()) + 4;
  const int dim = base + (commanded_velocity.has_value() ? 2 : 0);
  Eigen::VectorXd o(dim);
  int k = 0;
  if (position.has_value()) {
    o[k++] = position->x();
    o[k++] = position->y();
    o[k++] = heading;
    o[k++] = linear_velocity.x();
    o[k++] = linear_velocity.y();
    o[k++] = angular_velocity;
  } else {
    for (const double r : laser_ranges) o[k++] = r;
    o[k++] = linear_velocity.x();
    o[k++] = linear_velocity.y();
    o[k++] = angular_velocity;
    o[k++] = heading;
  }
  if (commanded_velocity.has_value()) {
    o[k++] = commanded_velocity->x();
    o[k++] = commanded_velocity->y();
  }
  return o;
}

int observation_dim(const SensorConfig& sensors, bool command_conditioned) {
  const int base = sensors.full_state ? 6 : sensors.laser_beams + 4;
  return base + (command_conditioned ? 2 : 0);
}

Observation observe(const ObstacleField& field, const VehicleState& x,
                    const SensorConfig& sensors,
                    const std::optional<Vec2>& commanded_velocity, Rng& rng) {
  Observation obs;
  obs.commanded_velocity = commanded_velocity;
  if (sensors.full_state) {
    obs.position = x.position + Vec2(rng.normal(0.0, sensors.motion_noise),
                                     rng.normal(0.0, sensors.motion_noise));
    obs.heading = x.heading + rng.normal(0.0, sensors.motion_noise);
    obs.linear_velocity =
        x.linear_velocity + Vec2(rng.normal(0.0, sensors.motion_noise),
                                 rng.normal(0.0, sensors.motion_noise));
    obs.angular_velocity = x.angular_velocity + rng.normal(0.0, sensors.motion_noise);
    return obs;
  }
  obs.laser_ranges =
      raycast_laser(field, x.position, x.heading, sensors.laser_beams,
                    sensors.laser_fan_angle, sensors.laser_max_range);
  for (double& r : obs.laser_ranges) {
    r += rng.normal(0.0, sensors.laser_noise);
    r = std::clamp(r, 0.0, sensors.laser_max_range);
  }
  obs.linear_velocity =
      x.linear_velocity + Vec2(rng.normal(0.0, sensors.motion_noise),
                               rng.normal(0.0, sensors.motion_noise));
  obs.angular_velocity = x.angular_velocity + rng.normal(0.0, sensors.motion_noise);
  obs.heading = x.heading + rng.normal(0.0, sensors.motion_noise);
  return obs;
}

}  // namespace platonav
