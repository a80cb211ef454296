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

#ifndef PLATONAV_TRAJOPT_HPP_
#define PLATONAV_TRAJOPT_HPP_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "platonav/gaussian.hpp"

namespace platonav {

// Second-order expansion of a stage cost around (x, u):
//   c(x+dx, u+du) ~= c0 + cx.dx + cu.du
//                    + 1/2 dx'Cxx dx + 1/2 du'Cuu du + dx'Cxu du.
struct CostExpansion {
  double c0 = 0.0;
  Eigen::VectorXd cx, cu;
  Eigen::MatrixXd cxx, cuu, cxu;
};

// Stage cost over a finite horizon; quadratize defaults to central finite
// differences of value().
class StageCostModel {
 public:
  virtual ~StageCostModel() = default;

  virtual double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                       int t) const = 0;
  virtual double terminal_value(const Eigen::VectorXd& x) const {
    (void)x;
    return 0.0;
  }
  virtual CostExpansion quadratize(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u, int t) const;
  virtual void quadratize_terminal(const Eigen::VectorXd& x,
                                   Eigen::VectorXd& vx,
                                   Eigen::MatrixXd& vxx) const;

  double fd_epsilon = 1e-4;
};

// Discrete-time step map; linearize defaults to central finite differences
// of step().
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual Eigen::VectorXd step(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) const = 0;
  virtual void linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         Eigen::MatrixXd& A, Eigen::MatrixXd& B,
                         Eigen::VectorXd& c) const;

  double fd_epsilon = 1e-5;
};

// Time-varying linear-Gaussian controller u ~ N(K_t x + k_t, S_t).
struct LinearGaussianController {
  std::vector<Eigen::MatrixXd> gains;        // K_t, m x n
  std::vector<Eigen::VectorXd> offsets;      // k_t, m
  std::vector<Eigen::MatrixXd> covariances;  // S_t, m x m SPD

  int horizon() const { return static_cast<int>(gains.size()); }
  Eigen::VectorXd action_mean(int t, const Eigen::VectorXd& x) const {
    return gains[static_cast<std::size_t>(t)] * x +
           offsets[static_cast<std::size_t>(t)];
  }
  Gaussian action_distribution(int t, const Eigen::VectorXd& x) const {
    return Gaussian(action_mean(t, x), covariances[static_cast<std::size_t>(t)]);
  }
  // Receding-horizon warm start: drop the first step, repeat the last.
  LinearGaussianController time_shifted() const;
};

struct MpcConfig {
  int horizon = 15;
  double lambda = 0.0;       // KL weight against the learner (Eq. 1 sense)
  double temperature = 1.0;  // S_t = temperature * Quu_t^-1
  int max_iterations = 10;
  double tolerance = 1e-6;  // relative cost-improvement stop
  double reg_init = 1e-6;   // Levenberg-Marquardt schedule bounds
  double reg_max = 1e6;
  double linesearch_shrink = 0.5;
  int linesearch_trials = 10;
  double fd_epsilon = 1e-5;
};

struct SolveInfo {
  double cost = 0.0;  // mean-trajectory cost of the returned controller
  int iterations = 0;
  std::vector<Eigen::MatrixXd> value_hessians;  // V_xx per timestep (0..H)
  std::vector<Eigen::VectorXd> nominal_states;
  std::vector<Eigen::VectorXd> nominal_controls;
};

// Maximum-entropy iLQG: alternating linearization/quadratization along the
// nominal trajectory, an entropy-regularized LQR backward pass
// (K = -Quu^-1 Qux, S_t = temperature_t * Quu^-1) and a backtracked forward
// update accepted only on strict cost decrease. Throws OptimizationFailed if
// Quu cannot be made positive definite within the regularization schedule,
// SimulationDiverged on non-finite rollouts.
LinearGaussianController max_entropy_ilqg(
    const Eigen::VectorXd& x0, const StageCostModel& cost,
    const DynamicsModel& dynamics, const MpcConfig& config,
    const LinearGaussianController* warm_start = nullptr,
    SolveInfo* info = nullptr);

struct PlanResult {
  Gaussian action;  // first-timestep action distribution at x0
  LinearGaussianController controller;
  double cost = 0.0;
};

// KL-penalized MPC teacher: the first timestep's stage cost is augmented by
// the quadratic-in-u part of lambda * KL(pi || learner) and the first
// timestep's entropy temperature is shifted by lambda; the remaining
// timesteps carry no penalty. learner_action is the learner's action
// distribution at the current observation. lambda = 0 takes the exact
// unpenalized path.
PlanResult mpc_teacher_plan(const Eigen::VectorXd& x0,
                            const Gaussian& learner_action,
                            const StageCostModel& cost,
                            const DynamicsModel& dynamics,
                            const MpcConfig& config,
                            const LinearGaussianController* warm_start = nullptr);

// The locally optimal supervisor: identical machinery with lambda = 0.
PlanResult mpc_star_plan(const Eigen::VectorXd& x0, const StageCostModel& cost,
                         const DynamicsModel& dynamics, const MpcConfig& config,
                         const LinearGaussianController* warm_start = nullptr);

}  // namespace platonav

#endif  // PLATONAV_TRAJOPT_HPP_
