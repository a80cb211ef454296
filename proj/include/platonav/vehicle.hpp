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

#ifndef PLATONAV_VEHICLE_HPP_
#define PLATONAV_VEHICLE_HPP_

#include <Eigen/Dense>

#include "platonav/rng.hpp"
#include "platonav/world.hpp"

namespace platonav {

// Planar rigid body: position (m), heading in (-pi, pi], linear velocity
// (m/s), angular velocity (rad/s). State vector layout is
// [px, py, heading, vx, vy, omega].
struct VehicleState {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
  Vec2 linear_velocity = Vec2::Zero();
  double angular_velocity = 0.0;

  static constexpr int kDim = 6;

  Eigen::VectorXd to_vector() const;
  static VehicleState from_vector(const Eigen::VectorXd& x);
  bool finite() const;
};

// Forward thrust (m/s^2) + turning torque (rad/s^2), clamped to a box.
struct ControlInput {
  Vec2 u = Vec2::Zero();

  static constexpr int kDim = 2;
};

struct ControlBounds {
  Vec2 lo = Vec2(-4.0, -4.0);
  Vec2 hi = Vec2(4.0, 4.0);

  ControlInput clamp(const Vec2& raw) const {
    return {raw.cwiseMax(lo).cwiseMin(hi)};
  }
};

// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

// Semi-implicit Euler step. Control noise eps ~ N(0, noise_scale^2 I) is
// added to u before integration; heading is wrapped afterwards. Throws
// SimulationDiverged when the result is non-finite.
VehicleState step(const VehicleState& x, const ControlInput& u, double dt,
                  double noise_scale, Rng& rng);

// Noise-free step that leaves the heading unwrapped; the smooth map used for
// planning rollouts and finite differences.
Eigen::VectorXd step_raw(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         double dt);

// Central finite differences of the noise-free step map:
//   f(x + dx, u + du) ~= A dx + B du + c,  c = f(x, u).
void linearize_dynamics(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                        double dt, Eigen::MatrixXd& A, Eigen::MatrixXd& B,
                        Eigen::VectorXd& c, double fd_epsilon = 1e-5);

}  // namespace platonav

#endif  // PLATONAV_VEHICLE_HPP_
