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

#include "platonav/costs.hpp"

#include <cmath>

namespace platonav {

double stage_cost(const TaskCost& cost, const ObstacleField& field,
                  const VehicleState& x, const ControlInput& u) {
  const Vec2 dv = x.linear_velocity - cost.target_linear_velocity;
  const double dh = wrap_angle(x.heading - cost.target_heading);
  const Vec2 du = u.u - cost.hover_control.u;
  const double sd = signed_distance(field, x.position);
  const double hinge = std::max(cost.d_safe - sd, 0.0);
  return cost.weight_velocity * dv.squaredNorm() +
         cost.weight_heading * dh * dh +
         cost.weight_angvel * x.angular_velocity * x.angular_velocity +
         cost.weight_control * du.squaredNorm() + cost.weight_obstacle * hinge;
}

double normalized_stage_cost(const TaskCost& cost, const ObstacleField& field,
                             const VehicleState& x, const ControlInput& u,
                             double scale) {
  return 1.0 - std::exp(-stage_cost(cost, field, x, u) / scale);
}

double VehicleStageCost::state_cost(const Eigen::VectorXd& x,
                                    Eigen::VectorXd* grad,
                                    Eigen::MatrixXd* hess) const {
  const Vec2 v(x[3], x[4]);
  const Vec2 dv = v - cost_.target_linear_velocity;
  const double dh = wrap_angle(x[2] - cost_.target_heading);
  const double omega = x[5];
  Vec2 sd_grad;
  const double sd = signed_distance_gradient(field_, Vec2(x[0], x[1]), &sd_grad);
  const double hinge = std::max(cost_.d_safe - sd, 0.0);

  const double value = cost_.weight_velocity * dv.squaredNorm() +
                       cost_.weight_heading * dh * dh +
                       cost_.weight_angvel * omega * omega +
                       cost_.weight_obstacle * hinge;
  if (grad != nullptr) {
    grad->setZero(VehicleState::kDim);
    if (hinge > 0.0) {
      (*grad)[0] = -cost_.weight_obstacle * sd_grad.x();
      (*grad)[1] = -cost_.weight_obstacle * sd_grad.y();
    }
    (*grad)[2] = 2.0 * cost_.weight_heading * dh;
    (*grad)[3] = 2.0 * cost_.weight_velocity * dv.x();
    (*grad)[4] = 2.0 * cost_.weight_velocity * dv.y();
    (*grad)[5] = 2.0 * cost_.weight_angvel * omega;
  }
  if (hess != nullptr) {
    hess->setZero(VehicleState::kDim, VehicleState::kDim);
    // Hinge curvature omitted; the LM regularizer covers it.
    (*hess)(2, 2) = 2.0 * cost_.weight_heading;
    (*hess)(3, 3) = 2.0 * cost_.weight_velocity;
    (*hess)(4, 4) = 2.0 * cost_.weight_velocity;
    (*hess)(5, 5) = 2.0 * cost_.weight_angvel;
  }
  return value;
}

double VehicleStageCost::value(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u, int) const {
  const Eigen::VectorXd du = u - cost_.hover_control.u;
  return state_cost(x, nullptr, nullptr) + cost_.weight_control * du.squaredNorm();
}

double VehicleStageCost::terminal_value(const Eigen::VectorXd& x) const {
  return terminal_weight_ * state_cost(x, nullptr, nullptr);
}

CostExpansion VehicleStageCost::quadratize(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& u, int) const {
  CostExpansion e;
  Eigen::VectorXd gx;
  Eigen::MatrixXd hx;
  const double sc = state_cost(x, &gx, &hx);
  const Eigen::VectorXd du = u - cost_.hover_control.u;
  e.c0 = sc + cost_.weight_control * du.squaredNorm();
  e.cx = gx;
  e.cu = 2.0 * cost_.weight_control * du;
  e.cxx = hx;
  e.cuu = 2.0 * cost_.weight_control *
          Eigen::MatrixXd::Identity(ControlInput::kDim, ControlInput::kDim);
  e.cxu = Eigen::MatrixXd::Zero(VehicleState::kDim, ControlInput::kDim);
  return e;
}

void VehicleStageCost::quadratize_terminal(const Eigen::VectorXd& x,
                                           Eigen::VectorXd& vx,
                                           Eigen::MatrixXd& vxx) const {
  state_cost(x, &vx, &vxx);
  vx *= terminal_weight_;
  vxx *= terminal_weight_;
}

}  // namespace platonav
