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

#include "platonav/trajopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "platonav/errors.hpp"

namespace platonav {

CostExpansion StageCostModel::quadratize(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& u,
                                         int t) const {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u.size());
  const double h = fd_epsilon;
  CostExpansion e;
  e.c0 = value(x, u, t);
  e.cx.resize(n);
  e.cu.resize(m);
  e.cxx.resize(n, n);
  e.cuu.resize(m, m);
  e.cxu.resize(n, m);

  Eigen::VectorXd z(n + m);
  z << x, u;
  const auto eval = [&](const Eigen::VectorXd& w) {
    return value(w.head(n), w.tail(m), t);
  };

  Eigen::VectorXd wp = z, wm = z;
  Eigen::VectorXd grad(n + m);
  for (int i = 0; i < n + m; ++i) {
    wp[i] += h;
    wm[i] -= h;
    grad[i] = (eval(wp) - eval(wm)) / (2.0 * h);
    wp[i] = z[i];
    wm[i] = z[i];
  }
  Eigen::MatrixXd hess(n + m, n + m);
  for (int i = 0; i < n + m; ++i) {
    wp = z;
    wp[i] += h;
    wm = z;
    wm[i] -= h;
    hess(i, i) = (eval(wp) - 2.0 * e.c0 + eval(wm)) / (h * h);
    for (int j = i + 1; j < n + m; ++j) {
      Eigen::VectorXd wpp = z, wpm = z, wmp = z, wmm = z;
      wpp[i] += h;
      wpp[j] += h;
      wpm[i] += h;
      wpm[j] -= h;
      wmp[i] -= h;
      wmp[j] += h;
      wmm[i] -= h;
      wmm[j] -= h;
      hess(i, j) = (eval(wpp) - eval(wpm) - eval(wmp) + eval(wmm)) / (4.0 * h * h);
      hess(j, i) = hess(i, j);
    }
  }
  e.cx = grad.head(n);
  e.cu = grad.tail(m);
  e.cxx = hess.topLeftCorner(n, n);
  e.cuu = hess.bottomRightCorner(m, m);
  e.cxu = hess.topRightCorner(n, m);
  return e;
}

void StageCostModel::quadratize_terminal(const Eigen::VectorXd& x,
                                         Eigen::VectorXd& vx,
                                         Eigen::MatrixXd& vxx) const {
  const int n = static_cast<int>(x.size());
  const double h = fd_epsilon;
  vx.resize(n);
  vxx.resize(n, n);
  const double c0 = terminal_value(x);
  Eigen::VectorXd wp = x, wm = x;
  for (int i = 0; i < n; ++i) {
    wp[i] += h;
    wm[i] -= h;
    vx[i] = (terminal_value(wp) - terminal_value(wm)) / (2.0 * h);
    vxx(i, i) = (terminal_value(wp) - 2.0 * c0 + terminal_value(wm)) / (h * h);
    wp[i] = x[i];
    wm[i] = x[i];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd wpp = x, wpm = x, wmp = x, wmm = x;
      wpp[i] += h;
      wpp[j] += h;
      wpm[i] += h;
      wpm[j] -= h;
      wmp[i] -= h;
      wmp[j] += h;
      wmm[i] -= h;
      wmm[j] -= h;
      vxx(i, j) = (terminal_value(wpp) - terminal_value(wpm) -
                   terminal_value(wmp) + terminal_value(wmm)) /
                  (4.0 * h * h);
      vxx(j, i) = vxx(i, j);
    }
  }
}

void DynamicsModel::linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                              Eigen::MatrixXd& A, Eigen::MatrixXd& B,
                              Eigen::VectorXd& c) const {
  const int n = state_dim();
  const int m = control_dim();
  const double h = fd_epsilon;
  A.resize(n, n);
  B.resize(n, m);
  c = step(x, u);
  Eigen::VectorXd wp = x, wm = x;
  for (int i = 0; i < n; ++i) {
    wp[i] += h;
    wm[i] -= h;
    A.col(i) = (step(wp, u) - step(wm, u)) / (2.0 * h);
    wp[i] = x[i];
    wm[i] = x[i];
  }
  Eigen::VectorXd up = u, um = u;
  for (int i = 0; i < m; ++i) {
    up[i] += h;
    um[i] -= h;
    B.col(i) = (step(x, up) - step(x, um)) / (2.0 * h);
    up[i] = u[i];
    um[i] = u[i];
  }
}

LinearGaussianController LinearGaussianController::time_shifted() const {
  LinearGaussianController shifted = *this;
  if (horizon() <= 1) return shifted;
  shifted.gains.erase(shifted.gains.begin());
  shifted.offsets.erase(shifted.offsets.begin());
  shifted.covariances.erase(shifted.covariances.begin());
  shifted.gains.push_back(shifted.gains.back());
  shifted.offsets.push_back(shifted.offsets.back());
  shifted.covariances.push_back(shifted.covariances.back());
  return shifted;
}

namespace {

struct Trajectory {
  std::vector<Eigen::VectorXd> xs;  // H + 1
  std::vector<Eigen::VectorXd> us;  // H
  double cost = std::numeric_limits<double>::infinity();
};

double trajectory_cost(const Trajectory& traj, const StageCostModel& cost) {
  double total = 0.0;
  const int H = static_cast<int>(traj.us.size());
  for (int t = 0; t < H; ++t) {
    total += cost.value(traj.xs[static_cast<std::size_t>(t)],
                        traj.us[static_cast<std::size_t>(t)], t);
  }
  total += cost.terminal_value(traj.xs.back());
  return total;
}

struct BackwardPassResult {
  std::vector<Eigen::MatrixXd> gains;
  std::vector<Eigen::VectorXd> feedforward;
  std::vector<Eigen::MatrixXd> quu_inverses;  // regularized Quu^-1 per t
  std::vector<Eigen::MatrixXd> value_hessians;
  double max_feedforward = 0.0;
  bool ok = false;
};

BackwardPassResult backward_pass(const Trajectory& traj,
                                 const StageCostModel& cost,
                                 const DynamicsModel& dynamics, double reg) {
  const int H = static_cast<int>(traj.us.size());
  const int m = dynamics.control_dim();
  BackwardPassResult result;
  result.gains.resize(static_cast<std::size_t>(H));
  result.feedforward.resize(static_cast<std::size_t>(H));
  result.quu_inverses.resize(static_cast<std::size_t>(H));
  result.value_hessians.resize(static_cast<std::size_t>(H) + 1);

  Eigen::VectorXd vx;
  Eigen::MatrixXd vxx;
  cost.quadratize_terminal(traj.xs.back(), vx, vxx);
  result.value_hessians[static_cast<std::size_t>(H)] = vxx;

  Eigen::MatrixXd A, B;
  Eigen::VectorXd c;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m, m);
  for (int t = H - 1; t >= 0; --t) {
    const auto ti = static_cast<std::size_t>(t);
    dynamics.linearize(traj.xs[ti], traj.us[ti], A, B, c);
    const CostExpansion e = cost.quadratize(traj.xs[ti], traj.us[ti], t);

    const Eigen::VectorXd qx = e.cx + A.transpose() * vx;
    const Eigen::VectorXd qu = e.cu + B.transpose() * vx;
    const Eigen::MatrixXd qxx = e.cxx + A.transpose() * vxx * A;
    Eigen::MatrixXd quu = e.cuu + B.transpose() * vxx * B;
    const Eigen::MatrixXd qux = e.cxu.transpose() + B.transpose() * vxx * A;

    quu = 0.5 * (quu + quu.transpose().eval());
    Eigen::MatrixXd quu_reg = quu + reg * identity;
    Eigen::LLT<Eigen::MatrixXd> llt(quu_reg);
    if (llt.info() != Eigen::Success) {
      return result;  // caller escalates the regularizer
    }

    const Eigen::MatrixXd gain = -llt.solve(qux);
    const Eigen::VectorXd ff = -llt.solve(qu);
    result.gains[ti] = gain;
    result.feedforward[ti] = ff;
    result.quu_inverses[ti] = llt.solve(identity);
    result.max_feedforward =
        std::max(result.max_feedforward, ff.cwiseAbs().maxCoeff());

    vx = qx + gain.transpose() * quu_reg * ff + gain.transpose() * qu +
         qux.transpose() * ff;
    vxx = qxx + gain.transpose() * quu_reg * gain + gain.transpose() * qux +
          qux.transpose() * gain;
    vxx = 0.5 * (vxx + vxx.transpose().eval());
    result.value_hessians[ti] = vxx;
  }
  result.ok = true;
  return result;
}

// Shared solver with a per-timestep entropy temperature.
LinearGaussianController solve_max_entropy(
    const Eigen::VectorXd& x0, const StageCostModel& cost,
    const DynamicsModel& dynamics, const MpcConfig& config,
    const std::vector<double>& temperatures,
    const LinearGaussianController* warm_start, SolveInfo* info) {
  const int H = config.horizon;
  if (H < 1) throw ContractViolation("max_entropy_ilqg: horizon must be >= 1");
  if (!x0.allFinite()) {
    throw ContractViolation("max_entropy_ilqg: non-finite initial state");
  }
  const int m = dynamics.control_dim();

  // Initial nominal: warm-start mean rollout, else zero controls.
  Trajectory nominal;
  nominal.xs.resize(static_cast<std::size_t>(H) + 1);
  nominal.us.resize(static_cast<std::size_t>(H));
  nominal.xs[0] = x0;
  for (int t = 0; t < H; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    if (warm_start != nullptr && warm_start->horizon() == H) {
      nominal.us[ti] = warm_start->action_mean(t, nominal.xs[ti]);
    } else {
      nominal.us[ti] = Eigen::VectorXd::Zero(m);
    }
    nominal.xs[ti + 1] = dynamics.step(nominal.xs[ti], nominal.us[ti]);
    if (!nominal.xs[ti + 1].allFinite()) {
      throw SimulationDiverged("max_entropy_ilqg: warm-start rollout diverged");
    }
  }
  nominal.cost = trajectory_cost(nominal, cost);
  if (!std::isfinite(nominal.cost)) {
    throw SimulationDiverged("max_entropy_ilqg: non-finite initial cost");
  }

  double reg = 0.0;
  BackwardPassResult bp;
  int iterations = 0;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    ++iterations;
    bp = backward_pass(nominal, cost, dynamics, reg);
    while (!bp.ok) {
      reg = reg == 0.0 ? config.reg_init : reg * 10.0;
      if (reg > config.reg_max) {
        throw OptimizationFailed(
            "max_entropy_ilqg: Quu not positive definite at maximum "
            "regularization");
      }
      bp = backward_pass(nominal, cost, dynamics, reg);
    }

    if (bp.max_feedforward < 1e-12) break;  // stationary

    // Backtracking line search on the mean trajectory.
    bool accepted = false;
    double alpha = 1.0;
    for (int trial = 0; trial < config.linesearch_trials; ++trial) {
      Trajectory candidate;
      candidate.xs.resize(static_cast<std::size_t>(H) + 1);
      candidate.us.resize(static_cast<std::size_t>(H));
      candidate.xs[0] = x0;
      bool finite = true;
      for (int t = 0; t < H; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        candidate.us[ti] = nominal.us[ti] + alpha * bp.feedforward[ti] +
                           bp.gains[ti] * (candidate.xs[ti] - nominal.xs[ti]);
        candidate.xs[ti + 1] = dynamics.step(candidate.xs[ti], candidate.us[ti]);
        if (!candidate.xs[ti + 1].allFinite()) {
          finite = false;
          break;
        }
      }
      if (finite) {
        candidate.cost = trajectory_cost(candidate, cost);
        if (std::isfinite(candidate.cost) && candidate.cost < nominal.cost) {
          const double improvement =
              (nominal.cost - candidate.cost) /
              std::max(std::abs(nominal.cost), 1.0);
          nominal = std::move(candidate);
          accepted = true;
          if (reg > 0.0) reg = reg <= config.reg_init ? 0.0 : reg * 0.1;
          if (improvement < config.tolerance) iter = config.max_iterations;
          break;
        }
      }
      alpha *= config.linesearch_shrink;
    }
    if (!accepted) {
      reg = reg == 0.0 ? config.reg_init : reg * 10.0;
      if (reg > config.reg_max) break;  // locally optimal under this model
    }
  }

  // Final backward pass so gains and covariances match the returned nominal.
  bp = backward_pass(nominal, cost, dynamics, reg);
  while (!bp.ok) {
    reg = reg == 0.0 ? config.reg_init : reg * 10.0;
    if (reg > config.reg_max) {
      throw OptimizationFailed(
          "max_entropy_ilqg: Quu not positive definite at maximum "
          "regularization");
    }
    bp = backward_pass(nominal, cost, dynamics, reg);
  }

  LinearGaussianController controller;
  controller.gains.resize(static_cast<std::size_t>(H));
  controller.offsets.resize(static_cast<std::size_t>(H));
  controller.covariances.resize(static_cast<std::size_t>(H));
  for (int t = 0; t < H; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    controller.gains[ti] = bp.gains[ti];
    controller.offsets[ti] = nominal.us[ti] - bp.gains[ti] * nominal.xs[ti];
    Eigen::MatrixXd cov = temperatures[ti] * bp.quu_inverses[ti];
    controller.covariances[ti] = 0.5 * (cov + cov.transpose().eval());
  }

  if (info != nullptr) {
    info->cost = nominal.cost;
    info->iterations = iterations;
    info->value_hessians = bp.value_hessians;
    info->nominal_states = nominal.xs;
    info->nominal_controls = nominal.us;
  }
  return controller;
}

// Adds the quadratic-in-u part of lambda * KL(pi(.|x) || learner) to the
// first timestep's stage cost.
class KlAugmentedCost : public StageCostModel {
 public:
  KlAugmentedCost(const StageCostModel& base, const Gaussian& learner,
                  double lambda)
      : base_(base), mean_(learner.mean()), lambda_(lambda) {
    precision_ = Eigen::LLT<Eigen::MatrixXd>(learner.covariance())
                     .solve(Eigen::MatrixXd::Identity(learner.dim(), learner.dim()));
    fd_epsilon = base.fd_epsilon;
  }

  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
               int t) const override {
    double v = base_.value(x, u, t);
    if (t == 0) {
      const Eigen::VectorXd d = u - mean_;
      v += 0.5 * lambda_ * d.dot(precision_ * d);
    }
    return v;
  }

  double terminal_value(const Eigen::VectorXd& x) const override {
    return base_.terminal_value(x);
  }

  CostExpansion quadratize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           int t) const override {
    CostExpansion e = base_.quadratize(x, u, t);
    if (t == 0) {
      const Eigen::VectorXd d = u - mean_;
      e.c0 += 0.5 * lambda_ * d.dot(precision_ * d);
      e.cu += lambda_ * (precision_ * d);
      e.cuu += lambda_ * precision_;
    }
    return e;
  }

  void quadratize_terminal(const Eigen::VectorXd& x, Eigen::VectorXd& vx,
                           Eigen::MatrixXd& vxx) const override {
    base_.quadratize_terminal(x, vx, vxx);
  }

 private:
  const StageCostModel& base_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd precision_;
  double lambda_;
};

}  // namespace

LinearGaussianController max_entropy_ilqg(
    const Eigen::VectorXd& x0, const StageCostModel& cost,
    const DynamicsModel& dynamics, const MpcConfig& config,
    const LinearGaussianController* warm_start, SolveInfo* info) {
  const std::vector<double> temperatures(static_cast<std::size_t>(config.horizon),
                                         config.temperature);
  return solve_max_entropy(x0, cost, dynamics, config, temperatures, warm_start,
                           info);
}

PlanResult mpc_teacher_plan(const Eigen::VectorXd& x0,
                            const Gaussian& learner_action,
                            const StageCostModel& cost,
                            const DynamicsModel& dynamics,
                            const MpcConfig& config,
                            const LinearGaussianController* warm_start) {
  if (config.lambda < 0.0) {
    throw ContractViolation("mpc_teacher_plan: lambda must be >= 0");
  }
  std::vector<double> temperatures(static_cast<std::size_t>(config.horizon),
                                   config.temperature);
  SolveInfo info;
  LinearGaussianController controller;
  if (config.lambda == 0.0) {
    controller =
        solve_max_entropy(x0, cost, dynamics, config, temperatures, warm_start, &info);
  } else {
    // The covariance terms of the KL shift the first step's effective
    // entropy temperature; constants are dropped.
    temperatures[0] += config.lambda;
    const KlAugmentedCost augmented(cost, learner_action, config.lambda);
    controller = solve_max_entropy(x0, augmented, dynamics, config, temperatures,
                                   warm_start, &info);
  }
  return {controller.action_distribution(0, x0), std::move(controller), info.cost};
}

PlanResult mpc_star_plan(const Eigen::VectorXd& x0, const StageCostModel& cost,
                         const DynamicsModel& dynamics, const MpcConfig& config,
                         const LinearGaussianController* warm_start) {
  MpcConfig star_config = config;
  star_config.lambda = 0.0;
  std::vector<double> temperatures(static_cast<std::size_t>(config.horizon),
                                   config.temperature);
  SolveInfo info;
  LinearGaussianController controller = solve_max_entropy(
      x0, cost, dynamics, star_config, temperatures, warm_start, &info);
  return {controller.action_distribution(0, x0), std::move(controller), info.cost};
}

}  // namespace platonav
