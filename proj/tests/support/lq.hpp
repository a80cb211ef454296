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

// Test-only LQ fixtures: an analytic linear-quadratic problem for the solver
// plus an independent finite-horizon Riccati recursion oracle.

#ifndef PLATONAV_TESTS_SUPPORT_LQ_HPP_
#define PLATONAV_TESTS_SUPPORT_LQ_HPP_

#include <vector>

#include <Eigen/Dense>

#include "platonav/rng.hpp"
#include "platonav/trajopt.hpp"

namespace platonav::testing {

// x' = A x + B u + c.
class LinearDynamics : public DynamicsModel {
 public:
  LinearDynamics(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

  int state_dim() const override { return static_cast<int>(a_.rows()); }
  int control_dim() const override { return static_cast<int>(b_.cols()); }
  Eigen::VectorXd step(const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u) const override {
    return a_ * x + b_ * u + c_;
  }
  void linearize(const Eigen::VectorXd&, const Eigen::VectorXd&,
                 Eigen::MatrixXd& a, Eigen::MatrixXd& b,
                 Eigen::VectorXd& c) const override {
    a = a_;
    b = b_;
    c = c_;
  }

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }

 private:
  Eigen::MatrixXd a_, b_;
  Eigen::VectorXd c_;
};

// Stage cost x'Qx + u'Ru + 2 x'N u + q.x + r.u, terminal x'Qf x.
class LqCost : public StageCostModel {
 public:
  LqCost(Eigen::MatrixXd q, Eigen::MatrixXd r, Eigen::MatrixXd qf)
      : q_(std::move(q)), r_(std::move(r)), qf_(std::move(qf)) {
    n_ = static_cast<int>(q_.rows());
    m_ = static_cast<int>(r_.rows());
    cross_ = Eigen::MatrixXd::Zero(n_, m_);
    lin_x_ = Eigen::VectorXd::Zero(n_);
    lin_u_ = Eigen::VectorXd::Zero(m_);
  }

  void set_cross(Eigen::MatrixXd n) { cross_ = std::move(n); }
  void set_linear(Eigen::VectorXd q, Eigen::VectorXd r) {
    lin_x_ = std::move(q);
    lin_u_ = std::move(r);
  }

  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
               int) const override {
    return x.dot(q_ * x) + u.dot(r_ * u) + 2.0 * x.dot(cross_ * u) +
           lin_x_.dot(x) + lin_u_.dot(u);
  }
  double terminal_value(const Eigen::VectorXd& x) const override {
    return x.dot(qf_ * x);
  }
  CostExpansion quadratize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           int) const override {
    CostExpansion e;
    e.c0 = value(x, u, 0);
    e.cx = 2.0 * q_ * x + 2.0 * cross_ * u + lin_x_;
    e.cu = 2.0 * r_ * u + 2.0 * cross_.transpose() * x + lin_u_;
    e.cxx = 2.0 * q_;
    e.cuu = 2.0 * r_;
    e.cxu = 2.0 * cross_;
    return e;
  }
  void quadratize_terminal(const Eigen::VectorXd& x, Eigen::VectorXd& vx,
                           Eigen::MatrixXd& vxx) const override {
    vx = 2.0 * qf_ * x;
    vxx = 2.0 * qf_;
  }

 private:
  Eigen::MatrixXd q_, r_, qf_, cross_;
  Eigen::VectorXd lin_x_, lin_u_;
  int n_ = 0, m_ = 0;
};

struct RiccatiSolution {
  // u_t = -K_t x_t (weight convention, no affine terms).
  std::vector<Eigen::MatrixXd> gains;
  // Cost-to-go x' P_t x, t = 0..H.
  std::vector<Eigen::MatrixXd> value_weights;
};

// Textbook finite-horizon discrete Riccati recursion in the weight
// convention, independent of the solver's Q-function arrangement.
inline RiccatiSolution riccati_recursion(const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& b,
                                         const Eigen::MatrixXd& q,
                                         const Eigen::MatrixXd& r,
                                         const Eigen::MatrixXd& qf,
                                         int horizon) {
  RiccatiSolution sol;
  sol.gains.resize(static_cast<std::size_t>(horizon));
  sol.value_weights.resize(static_cast<std::size_t>(horizon) + 1);
  Eigen::MatrixXd p = qf;
  sol.value_weights[static_cast<std::size_t>(horizon)] = p;
  for (int t = horizon - 1; t >= 0; --t) {
    const Eigen::MatrixXd brb = r + b.transpose() * p * b;
    const Eigen::MatrixXd k = brb.inverse() * (b.transpose() * p * a);
    p = q + a.transpose() * p * a - a.transpose() * p * b * k;
    p = 0.5 * (p + p.transpose().eval());
    sol.gains[static_cast<std::size_t>(t)] = k;
    sol.value_weights[static_cast<std::size_t>(t)] = p;
  }
  return sol;
}

struct LqInstance {
  Eigen::MatrixXd a, b, q, r, qf;
  Eigen::VectorXd x0;
};

inline LqInstance random_lq_instance(int state_dim, int control_dim, Rng& rng) {
  LqInstance inst;
  inst.a.resize(state_dim, state_dim);
  for (int i = 0; i < state_dim; ++i) {
    for (int j = 0; j < state_dim; ++j) {
      inst.a(i, j) = rng.normal(0.0, 1.0 / std::sqrt(double(state_dim)));
    }
  }
  inst.b.resize(state_dim, control_dim);
  for (int i = 0; i < state_dim; ++i) {
    for (int j = 0; j < control_dim; ++j) inst.b(i, j) = rng.normal();
  }
  Eigen::MatrixXd g(state_dim, state_dim);
  for (int i = 0; i < state_dim; ++i) {
    for (int j = 0; j < state_dim; ++j) g(i, j) = rng.normal();
  }
  inst.q = g.transpose() * g / double(state_dim);
  Eigen::MatrixXd h(control_dim, control_dim);
  for (int i = 0; i < control_dim; ++i) {
    for (int j = 0; j < control_dim; ++j) h(i, j) = rng.normal();
  }
  inst.r = h.transpose() * h / double(control_dim) +
           0.5 * Eigen::MatrixXd::Identity(control_dim, control_dim);
  Eigen::MatrixXd gf(state_dim, state_dim);
  for (int i = 0; i < state_dim; ++i) {
    for (int j = 0; j < state_dim; ++j) gf(i, j) = rng.normal();
  }
  inst.qf = gf.transpose() * gf / double(state_dim);
  inst.x0.resize(state_dim);
  for (int i = 0; i < state_dim; ++i) inst.x0[i] = rng.normal();
  return inst;
}

}  // namespace platonav::testing

#endif  // PLATONAV_TESTS_SUPPORT_LQ_HPP_
