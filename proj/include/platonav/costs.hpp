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

#ifndef PLATONAV_COSTS_HPP_
#define PLATONAV_COSTS_HPP_

#include "platonav/trajopt.hpp"
#include "platonav/vehicle.hpp"
#include "platonav/world.hpp"

namespace platonav {

// Task objective: hold a target velocity and heading, minimize control
// effort and angular rate, stay clear of obstacles. Weight defaults follow
// the quadrotor cost ratios (the height/attitude terms collapse into the
// heading term in the planar analogue).
struct TaskCost {
  Vec2 target_linear_velocity = Vec2(1.5, 0.0);
  double target_heading = 0.0;
  double weight_velocity = 1e3;
  double weight_heading = 1e4;
  double weight_angvel = 250.0;
  double weight_control = 0.008;  // 5^-3
  double weight_obstacle = 1e3;
  double d_safe = 1.0;
  ControlInput hover_control{Vec2::Zero()};
};

// Weighted sum of squared velocity error, wrapped squared heading error,
// squared angular velocity, squared control deviation from hover, plus the
// obstacle hinge weight_obstacle * max(d_safe - signed_distance, 0).
double stage_cost(const TaskCost& cost, const ObstacleField& field,
                  const VehicleState& x, const ControlInput& u);

// Learner-facing cost squashed into [0, 1]: 1 - exp(-L / scale).
double normalized_stage_cost(const TaskCost& cost, const ObstacleField& field,
                             const VehicleState& x, const ControlInput& u,
                             double scale);

// Planning adapter over the vehicle step map.
class VehicleDynamicsModel : public DynamicsModel {
 public:
  explicit VehicleDynamicsModel(double dt) : dt_(dt) {}

  int state_dim() const override { return VehicleState::kDim; }
  int control_dim() const override { return ControlInput::kDim; }
  Eigen::VectorXd step(const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u) const override {
    return step_raw(x, u, dt_);
  }
  void linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                 Eigen::MatrixXd& A, Eigen::MatrixXd& B,
                 Eigen::VectorXd& c) const override {
    linearize_dynamics(x, u, dt_, A, B, c, fd_epsilon);
  }

 private:
  double dt_;
};

// Planning adapter over stage_cost with analytic derivatives. The obstacle
// hinge contributes its gradient only (Gauss-Newton style); Levenberg-
// Marquardt regularization in the solver covers the missing curvature. The
// terminal value is the state-dependent part of the stage cost scaled by
// terminal_weight.
class VehicleStageCost : public StageCostModel {
 public:
  VehicleStageCost(TaskCost cost, const ObstacleField& field,
                   double terminal_weight = 5.0)
      : cost_(std::move(cost)), field_(field), terminal_weight_(terminal_weight) {}

  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
               int t) const override;
  double terminal_value(const Eigen::VectorXd& x) const override;
  CostExpansion quadratize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           int t) const override;
  void quadratize_terminal(const Eigen::VectorXd& x, Eigen::VectorXd& vx,
                           Eigen::MatrixXd& vxx) const override;

  const TaskCost& task() const { return cost_; }

 private:
  double state_cost(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                    Eigen::MatrixXd* hess) const;

  TaskCost cost_;
  const ObstacleField& field_;
  double terminal_weight_;
};

}  // namespace platonav

#endif  // PLATONAV_COSTS_HPP_
