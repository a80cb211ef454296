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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "platonav/errors.hpp"
#include "platonav/policy.hpp"

using namespace platonav;

namespace {

// Plain-loop forward oracle, no Eigen products.
Eigen::Vector2d forward_oracle(const GaussianMlpPolicy& p,
                               const Eigen::VectorXd& obs) {
  std::vector<double> z(static_cast<std::size_t>(obs.size()));
  for (Eigen::Index i = 0; i < obs.size(); ++i) {
    z[static_cast<std::size_t>(i)] = (obs[i] - p.norm_mean[i]) / p.norm_scale[i];
  }
  const auto layer = [](const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                        const std::vector<double>& in, bool relu) {
    std::vector<double> out(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      double acc = b[i];
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        acc += w(i, j) * in[static_cast<std::size_t>(j)];
      }
      out[static_cast<std::size_t>(i)] = relu && acc < 0.0 ? 0.0 : acc;
    }
    return out;
  };
  const auto h1 = layer(p.w1, p.b1, z, true);
  const auto h2 = layer(p.w2, p.b2, h1, true);
  const auto m = layer(p.w3, p.b3, h2, false);
  return Eigen::Vector2d(m[0], m[1]);
}

DemoDataset linear_dataset(int n, const Eigen::MatrixXd& map,
                           const Eigen::Vector2d& offset, Rng& rng) {
  DemoDataset data;
  for (int i = 0; i < n; ++i) {
    DemoRecord rec;
    rec.observation.resize(map.cols());
    for (Eigen::Index j = 0; j < map.cols(); ++j) {
      rec.observation[j] = rng.uniform(-1.0, 1.0);
    }
    rec.label_mean = map * rec.observation + offset;
    rec.label_precision = Eigen::Matrix2d::Identity();
    rec.label_sample = rec.label_mean;
    data.append(std::move(rec));
  }
  return data;
}

}  // namespace

TEST_CASE("zero weights and biases give a zero mean") {
  Rng rng(1);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(4, 8, 0.1, rng);
  p.w1.setZero();
  p.w2.setZero();
  p.w3.setZero();
  const Gaussian out = policy_forward(p, Eigen::VectorXd::Ones(4));
  CHECK(out.mean().cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.covariance() == p.action_covariance);
}

TEST_CASE("identity-weight configuration passes nonnegative input through") {
  Rng rng(2);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(2, 4, 0.1, rng);
  p.w1.setZero();
  p.w2.setZero();
  p.w3.setZero();
  p.w1.topLeftCorner(2, 2).setIdentity();
  p.w2.topLeftCorner(2, 2).setIdentity();
  p.w3.leftCols(2).setIdentity();
  const Eigen::VectorXd obs = (Eigen::VectorXd(2) << 0.7, 0.2).finished();
  CHECK((p.mean(obs) - obs).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("forward pass matches the plain-loop oracle") {
  Rng rng(3);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(7, 16, 0.1, rng);
  for (Eigen::Index i = 0; i < 7; ++i) {
    p.norm_mean[i] = rng.normal();
    p.norm_scale[i] = 0.5 + rng.uniform();
  }
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd obs(7);
    for (int i = 0; i < 7; ++i) obs[i] = rng.normal();
    CHECK((p.mean(obs) - forward_oracle(p, obs)).cwiseAbs().maxCoeff() <=
          1e-10);
  }
}

TEST_CASE("forward pass is pure") {
  Rng rng(4);
  const GaussianMlpPolicy p = GaussianMlpPolicy::initialize(5, 10, 0.1, rng);
  Eigen::VectorXd obs(5);
  for (int i = 0; i < 5; ++i) obs[i] = rng.normal();
  CHECK(p.mean(obs) == p.mean(obs));
}

TEST_CASE("forward pass rejects dimension mismatches") {
  Rng rng(5);
  const GaussianMlpPolicy p = GaussianMlpPolicy::initialize(5, 10, 0.1, rng);
  CHECK_THROWS_AS(policy_forward(p, Eigen::VectorXd::Ones(4)),
                  ContractViolation);
}

TEST_CASE("weighted loss with identity precisions equals mean squared error") {
  Rng rng(6);
  const GaussianMlpPolicy p = GaussianMlpPolicy::initialize(3, 8, 0.1, rng);
  Rng data_rng(7);
  const DemoDataset data =
      linear_dataset(40, Eigen::MatrixXd::Random(2, 3), Eigen::Vector2d(0.1, -0.2),
                     data_rng);
  double mse = 0.0;
  for (const DemoRecord& rec : data.records) {
    mse += (p.mean(rec.observation) - rec.label_mean).squaredNorm();
  }
  mse /= static_cast<double>(data.size());
  CHECK(policy_loss(p, data) == doctest::Approx(mse).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(8);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(3, 5, 0.1, rng);
  DemoDataset data;
  Rng data_rng(9);
  for (int i = 0; i < 12; ++i) {
    DemoRecord rec;
    rec.observation.resize(3);
    for (int j = 0; j < 3; ++j) rec.observation[j] = data_rng.normal();
    rec.label_mean = Eigen::Vector2d(data_rng.normal(), data_rng.normal());
    Eigen::Matrix2d half;
    half << 1.0 + data_rng.uniform(), 0.3 * data_rng.normal(),
        0.3 * data_rng.normal(), 1.0 + data_rng.uniform();
    rec.label_precision = half * half.transpose();
    rec.label_sample = rec.label_mean;
    data.append(std::move(rec));
  }
  std::vector<int> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  const PolicyGradients g = policy_loss_gradient(p, data, all);

  const double eps = 1e-6;
  const auto check_tensor = [&](Eigen::MatrixXd& param,
                                const Eigen::MatrixXd& grad) {
    Eigen::MatrixXd fd(grad.rows(), grad.cols());
    for (Eigen::Index i = 0; i < param.rows(); ++i) {
      for (Eigen::Index j = 0; j < param.cols(); ++j) {
        const double keep = param(i, j);
        param(i, j) = keep + eps;
        const double up = policy_loss_gradient(p, data, all).loss;
        param(i, j) = keep - eps;
        const double dn = policy_loss_gradient(p, data, all).loss;
        param(i, j) = keep;
        fd(i, j) = (up - dn) / (2.0 * eps);
      }
    }
    const double denom = std::max(grad.norm(), 1e-10);
    CHECK((fd - grad).norm() / denom <= 1e-5);
  };
  check_tensor(p.w1, g.dw1);
  check_tensor(p.w2, g.dw2);
  check_tensor(p.w3, g.dw3);
  Eigen::MatrixXd b1 = p.b1, b2 = p.b2, b3 = p.b3;
  const auto check_bias = [&](Eigen::VectorXd& param, const Eigen::VectorXd& grad) {
    Eigen::VectorXd fd(grad.size());
    for (Eigen::Index i = 0; i < param.size(); ++i) {
      const double keep = param[i];
      param[i] = keep + eps;
      const double up = policy_loss_gradient(p, data, all).loss;
      param[i] = keep - eps;
      const double dn = policy_loss_gradient(p, data, all).loss;
      param[i] = keep;
      fd[i] = (up - dn) / (2.0 * eps);
    }
    const double denom = std::max(grad.norm(), 1e-10);
    CHECK((fd - grad).norm() / denom <= 1e-5);
  };
  check_bias(p.b1, g.db1);
  check_bias(p.b2, g.db2);
  check_bias(p.b3, g.db3);
}

TEST_CASE("linear targets train down to the least-squares optimum") {
  Rng rng(10);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(3, 16, 0.1, rng);
  Eigen::MatrixXd map(2, 3);
  map << 0.8, -0.4, 0.2, 0.1, 0.6, -0.7;
  Rng data_rng(11);
  const DemoDataset data = linear_dataset(200, map, Eigen::Vector2d(0.3, -0.1),
                                          data_rng);

  // Closed-form least squares over an affine model (the realizable optimum).
  Eigen::MatrixXd x(4, data.size());
  Eigen::MatrixXd y(2, data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    x.col(static_cast<Eigen::Index>(i)).head(3) = data.records[i].observation;
    x(3, static_cast<Eigen::Index>(i)) = 1.0;
    y.col(static_cast<Eigen::Index>(i)) = data.records[i].label_mean;
  }
  const Eigen::MatrixXd w_ls =
      (x * x.transpose()).ldlt().solve(x * y.transpose()).transpose();
  const double ls_optimum =
      (y - w_ls * x).colwise().squaredNorm().mean();

  TrainOptions options;
  options.learning_rate = 1e-3;
  options.batch_size = 64;
  options.epochs = 3000;
  Rng train_rng(12);
  const double final_loss = train_policy(p, data, options, train_rng);
  CHECK(final_loss <= ls_optimum + 1e-4);
}

TEST_CASE("a dataset of identical records is fitted to its point") {
  Rng rng(13);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(3, 16, 0.1, rng);
  DemoDataset data;
  const Eigen::VectorXd obs = (Eigen::VectorXd(3) << 0.4, -0.6, 1.0).finished();
  const Eigen::Vector2d target(0.8, -0.5);
  for (int i = 0; i < 50; ++i) {
    DemoRecord rec;
    rec.observation = obs;
    rec.label_mean = target;
    rec.label_precision = Eigen::Matrix2d::Identity();
    rec.label_sample = target;
    data.append(std::move(rec));
  }
  TrainOptions options;
  options.epochs = 800;
  Rng train_rng(14);
  train_policy(p, data, options, train_rng);
  CHECK((p.mean(obs) - target).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("training loss is monotone-ish across epochs") {
  Rng rng(15);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(4, 12, 0.1, rng);
  Rng data_rng(16);
  const DemoDataset data = linear_dataset(
      120, Eigen::MatrixXd::Random(2, 4), Eigen::Vector2d(0.0, 0.2), data_rng);
  std::vector<double> losses;
  TrainOptions options;
  options.epochs = 60;
  options.epoch_losses = &losses;
  Rng train_rng(17);
  train_policy(p, data, options, train_rng);
  REQUIRE(losses.size() == 60);
  for (std::size_t i = 1; i < losses.size(); ++i) {
    CHECK(losses[i] <= losses[i - 1] * 1.10 + 1e-9);
  }
  CHECK(losses.back() < losses.front());
}

TEST_CASE("training rejects an empty dataset and diverged losses") {
  Rng rng(18);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(3, 8, 0.1, rng);
  DemoDataset empty;
  TrainOptions options;
  Rng train_rng(19);
  CHECK_THROWS_AS(train_policy(p, empty, options, train_rng),
                  ContractViolation);

  Rng data_rng(20);
  const DemoDataset data = linear_dataset(
      30, Eigen::MatrixXd::Random(2, 3), Eigen::Vector2d::Zero(), data_rng);
  options.learning_rate = 1e300;  // force an overflow in the forward pass
  options.epochs = 2;
  CHECK_THROWS_AS(train_policy(p, data, options, train_rng), TrainingDiverged);
}

TEST_CASE("fitted covariance is the inverse of the average precisions") {
  DemoDataset data;
  DemoRecord a;
  a.observation = Eigen::VectorXd::Zero(2);
  a.label_mean = Eigen::Vector2d::Zero();
  a.label_sample = Eigen::Vector2d::Zero();
  a.label_precision = 2.0 * Eigen::Matrix2d::Identity();
  DemoRecord b = a;
  b.label_precision = 4.0 * Eigen::Matrix2d::Identity();
  data.append(a);
  data.append(b);
  const Eigen::Matrix2d cov = fit_policy_covariance(data);
  CHECK((cov - Eigen::Matrix2d::Identity() / 3.0).cwiseAbs().maxCoeff() <=
        1e-15);

  DemoDataset identity;
  a.label_precision = Eigen::Matrix2d::Identity();
  identity.append(a);
  CHECK((fit_policy_covariance(identity) - Eigen::Matrix2d::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-15);
}

TEST_CASE("fitted covariance matches an independent accumulation") {
  Rng rng(21);
  DemoDataset data;
  for (int i = 0; i < 25; ++i) {
    DemoRecord rec;
    rec.observation = Eigen::VectorXd::Zero(2);
    rec.label_mean = Eigen::Vector2d::Zero();
    rec.label_sample = Eigen::Vector2d::Zero();
    Eigen::Matrix2d half;
    half << 1.0 + rng.uniform(), 0.4 * rng.normal(), 0.4 * rng.normal(),
        1.0 + rng.uniform();
    rec.label_precision = half * half.transpose();
    data.append(std::move(rec));
  }
  // Independent route: accumulate entrywise in plain doubles, invert by the
  // 2x2 cofactor formula.
  double s00 = 0.0, s01 = 0.0, s10 = 0.0, s11 = 0.0;
  for (const DemoRecord& rec : data.records) {
    s00 += rec.label_precision(0, 0);
    s01 += rec.label_precision(0, 1);
    s10 += rec.label_precision(1, 0);
    s11 += rec.label_precision(1, 1);
  }
  const double n = static_cast<double>(data.size());
  s00 /= n;
  s01 /= n;
  s10 /= n;
  s11 /= n;
  const double det = s00 * s11 - s01 * s10;
  Eigen::Matrix2d expected;
  expected << s11 / det, -s01 / det, -s10 / det, s00 / det;
  CHECK((fit_policy_covariance(data) - expected).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("snapshots round-trip byte-identically") {
  Rng rng(22);
  GaussianMlpPolicy p = GaussianMlpPolicy::initialize(6, 9, 0.17, rng);
  for (Eigen::Index i = 0; i < 6; ++i) {
    p.norm_mean[i] = rng.normal();
    p.norm_scale[i] = 0.5 + rng.uniform();
  }
  const std::string text = policy_to_string(p);
  const GaussianMlpPolicy q = policy_from_string(text);
  CHECK(policy_to_string(q) == text);

  // Bit-identical forward outputs at the printed precision.
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd obs(6);
    for (int i = 0; i < 6; ++i) obs[i] = rng.normal();
    CHECK(p.mean(obs) == q.mean(obs));
  }
}

TEST_CASE("snapshot parsing rejects malformed input") {
  CHECK_THROWS_AS(policy_from_string("not a snapshot"), NumericalError);
  CHECK_THROWS_AS(policy_from_string("mlp_policy_snapshot v1\nw1 2 2\n1 2 3"),
                  NumericalError);
}
