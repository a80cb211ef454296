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

#include "platonav/vehicle.hpp"

#include <cmath>
#include <sstream>

#include "platonav/errors.hpp"

namespace platonav {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Eigen::VectorXd VehicleState::to_vector() const {
  Eigen::VectorXd x(kDim);
  x << position.x(), position.y(), heading, linear_velocity.x(),
      linear_velocity.y(), angular_velocity;
  return x;
}

VehicleState VehicleState::from_vector(const Eigen::VectorXd& x) {
  VehicleState s;
  s.position = Vec2(x[0], x[1]);
  s.heading = x[2];
  s.linear_velocity = Vec2(x[3], x[4]);
  s.angular_velocity = x[5];
  return s;
}

bool VehicleState::finite() const {
  return position.allFinite() && std::isfinite(heading) &&
         linear_velocity.allFinite() && std::isfinite(angular_velocity);
}

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

Eigen::VectorXd step_raw(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         double dt) {
  // Symplectic update: velocities first, then the pose with the new
  // velocities. Thrust acts along the current heading.
  const double heading = x[2];
  const double ca = std::cos(heading);
  const double sa = std::sin(heading);
  Eigen::VectorXd next(VehicleState::kDim);
  const double vx = x[3] + dt * u[0] * ca;
  const double vy = x[4] + dt * u[0] * sa;
  const double omega = x[5] + dt * u[1];
  next[3] = vx;
  next[4] = vy;
  next[5] = omega;
  next[2] = heading + dt * omega;
  next[0] = x[0] + dt * vx;
  next[1] = x[1] + dt * vy;
  return next;
}

VehicleState step(const VehicleState& x, const ControlInput& u, double dt,
                  double noise_scale, Rng& rng) {
  if (!(dt > 0.0) || dt > 0.1) {
    throw ContractViolation("step: dt must be in (0, 0.1]");
  }
  if (!x.finite()) {
    throw ContractViolation("step: non-finite state");
  }
  Eigen::VectorXd uu = u.u;
  if (noise_scale > 0.0) {
    uu[0] += rng.normal(0.0, noise_scale);
    uu[1] += rng.normal(0.0, noise_scale);
  }
  Eigen::VectorXd next = step_raw(x.to_vector(), uu, dt);
  next[2] = wrap_angle(next[2]);
  if (!next.allFinite()) {
    std::ostringstream msg;
    msg << "step: simulation diverged at state [" << next.transpose() << "]";
    throw SimulationDiverged(msg.str());
  }
  return VehicleState::from_vector(next);
}

void linearize_dynamics(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                        double dt, Eigen::MatrixXd& A, Eigen::MatrixXd& B,
                        Eigen::VectorXd& c, double fd_epsilon) {
  if (!x.allFinite() || !u.allFinite()) {
    throw ContractViolation("linearize_dynamics: non-finite inputs");
  }
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u.size());
  A.resize(n, n);
  B.resize(n, m);
  c = step_raw(x, u, dt);
  Eigen::VectorXd xp = x, xm = x, up = u, um = u;
  for (int i = 0; i < n; ++i) {
    xp[i] += fd_epsilon;
    xm[i] -= fd_epsilon;
    A.col(i) = (step_raw(xp, u, dt) - step_raw(xm, u, dt)) / (2.0 * fd_epsilon);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  for (int i = 0; i < m; ++i) {
    up[i] += fd_epsilon;
    um[i] -= fd_epsilon;
    B.col(i) = (step_raw(x, up, dt) - step_raw(x, um, dt)) / (2.0 * fd_epsilon);
    up[i] = u[i];
    um[i] = u[i];
  }
}

}  // namespace platonav
