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

#include "platonav/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "platonav/errors.hpp"

namespace platonav {

namespace {

Eigen::MatrixXd fan_in_uniform(int rows, int cols, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  Eigen::MatrixXd w(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      w(i, j) = rng.uniform(-bound, bound);
    }
  }
  return w;
}

}  // namespace

GaussianMlpPolicy GaussianMlpPolicy::initialize(int input_dim, int hidden_units,
                                                double init_covariance,
                                                Rng& rng) {
  if (input_dim < 1 || hidden_units < 1) {
    throw ContractViolation("policy: dimensions must be positive");
  }
  GaussianMlpPolicy p;
  p.w1 = fan_in_uniform(hidden_units, input_dim, rng);
  p.b1 = Eigen::VectorXd::Zero(hidden_units);
  p.w2 = fan_in_uniform(hidden_units, hidden_units, rng);
  p.b2 = Eigen::VectorXd::Zero(hidden_units);
  p.w3 = fan_in_uniform(2, hidden_units, rng);
  p.b3 = Eigen::VectorXd::Zero(2);
  p.norm_mean = Eigen::VectorXd::Zero(input_dim);
  p.norm_scale = Eigen::VectorXd::Ones(input_dim);
  p.action_covariance = init_covariance * Eigen::MatrixXd::Identity(2, 2);
  return p;
}

Eigen::VectorXd GaussianMlpPolicy::mean(const Eigen::VectorXd& observation) const {
  if (observation.size() != w1.cols()) {
    std::ostringstream msg;
    msg << "policy_forward: observation dim " << observation.size()
        << " != input dim " << w1.cols();
    throw ContractViolation(msg.str());
  }
  const Eigen::VectorXd z =
      (observation - norm_mean).cwiseQuotient(norm_scale);
  const Eigen::VectorXd h1 = (w1 * z + b1).cwiseMax(0.0);
  const Eigen::VectorXd h2 = (w2 * h1 + b2).cwiseMax(0.0);
  return w3 * h2 + b3;
}

Eigen::MatrixXd GaussianMlpPolicy::mean_batch(
    const Eigen::MatrixXd& observations) const {
  const Eigen::MatrixXd z =
      (observations.colwise() - norm_mean).array().colwise() /
      norm_scale.array();
  const Eigen::MatrixXd h1 = ((w1 * z).colwise() + b1).cwiseMax(0.0);
  const Eigen::MatrixXd h2 = ((w2 * h1).colwise() + b2).cwiseMax(0.0);
  return (w3 * h2).colwise() + b3;
}

Gaussian policy_forward(const GaussianMlpPolicy& policy,
                        const Eigen::VectorXd& observation) {
  return Gaussian(policy.mean(observation), policy.action_covariance);
}

void DemoDataset::append(DemoRecord record) {
  if (!records.empty() &&
      record.observation.size() != records.front().observation.size()) {
    throw ContractViolation("dataset: observation dimensionality changed");
  }
  records.push_back(std::move(record));
}

PolicyGradients policy_loss_gradient(const GaussianMlpPolicy& policy,
                                     const DemoDataset& data,
                                     const std::vector<int>& indices) {
  if (indices.empty()) {
    throw ContractViolation("policy_loss_gradient: empty batch");
  }
  const int n = static_cast<int>(indices.size());
  const int in = policy.input_dim();

  Eigen::MatrixXd obs(in, n);
  for (int j = 0; j < n; ++j) {
    obs.col(j) = data.records[static_cast<std::size_t>(indices[static_cast<std::size_t>(j)])].observation;
  }
  const Eigen::MatrixXd z =
      (obs.colwise() - policy.norm_mean).array().colwise() /
      policy.norm_scale.array();
  const Eigen::MatrixXd a1 = (policy.w1 * z).colwise() + policy.b1;
  const Eigen::MatrixXd h1 = a1.cwiseMax(0.0);
  const Eigen::MatrixXd a2 = (policy.w2 * h1).colwise() + policy.b2;
  const Eigen::MatrixXd h2 = a2.cwiseMax(0.0);
  const Eigen::MatrixXd out = (policy.w3 * h2).colwise() + policy.b3;

  PolicyGradients g;
  Eigen::MatrixXd dout(2, n);
  for (int j = 0; j < n; ++j) {
    const DemoRecord& rec =
        data.records[static_cast<std::size_t>(indices[static_cast<std::size_t>(j)])];
    const Eigen::Vector2d r = out.col(j) - rec.label_mean;
    g.loss += r.dot(rec.label_precision * r);
    dout.col(j) = 2.0 * (rec.label_precision * r);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  g.loss *= inv_n;
  dout *= inv_n;

  g.dw3 = dout * h2.transpose();
  g.db3 = dout.rowwise().sum();
  Eigen::MatrixXd dh2 = policy.w3.transpose() * dout;
  dh2 = (a2.array() > 0.0).select(dh2, 0.0);
  g.dw2 = dh2 * h1.transpose();
  g.db2 = dh2.rowwise().sum();
  Eigen::MatrixXd dh1 = policy.w2.transpose() * dh2;
  dh1 = (a1.array() > 0.0).select(dh1, 0.0);
  g.dw1 = dh1 * z.transpose();
  g.db1 = dh1.rowwise().sum();
  return g;
}

double policy_loss(const GaussianMlpPolicy& policy, const DemoDataset& data) {
  if (data.empty()) {
    throw ContractViolation("policy_loss: empty dataset");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd obs(policy.input_dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    obs.col(j) = data.records[static_cast<std::size_t>(j)].observation;
  }
  const Eigen::MatrixXd out = policy.mean_batch(obs);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const DemoRecord& rec = data.records[static_cast<std::size_t>(j)];
    const Eigen::Vector2d r = out.col(j) - rec.label_mean;
    loss += r.dot(rec.label_precision * r);
  }
  return loss / static_cast<double>(n);
}

namespace {

// Per-tensor Adam state.
struct AdamState {
  Eigen::MatrixXd m, v;
  void init(Eigen::Index rows, Eigen::Index cols) {
    m.setZero(rows, cols);
    v.setZero(rows, cols);
  }
  template <typename Param, typename Grad>
  void update(Param& param, const Grad& grad, double lr, double bias1,
              double bias2) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
    const Eigen::ArrayXXd mhat = m.array() / bias1;
    const Eigen::ArrayXXd vhat = v.array() / bias2;
    param.array() -= lr * mhat / (vhat.sqrt() + kEps);
  }
};

}  // namespace

double train_policy(GaussianMlpPolicy& policy, const DemoDataset& data,
                    const TrainOptions& options, Rng& rng) {
  if (data.empty()) {
    throw ContractViolation("train_policy: empty dataset");
  }
  const int n = static_cast<int>(data.size());
  const int in = policy.input_dim();

  if (options.update_normalizer) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(in);
    for (const DemoRecord& rec : data.records) mean += rec.observation;
    mean /= static_cast<double>(n);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(in);
    for (const DemoRecord& rec : data.records) {
      var += (rec.observation - mean).cwiseAbs2();
    }
    var /= static_cast<double>(n);
    policy.norm_mean = mean;
    policy.norm_scale = var.cwiseSqrt().cwiseMax(1e-8);
  }

  AdamState s_w1, s_b1, s_w2, s_b2, s_w3, s_b3;
  s_w1.init(policy.w1.rows(), policy.w1.cols());
  s_b1.init(policy.b1.size(), 1);
  s_w2.init(policy.w2.rows(), policy.w2.cols());
  s_b2.init(policy.b2.size(), 1);
  s_w3.init(policy.w3.rows(), policy.w3.cols());
  s_b3.init(policy.b3.size(), 1);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const int batch = std::max(1, std::min(options.batch_size, n));

  long step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    // Fisher-Yates with our own stream, for cross-platform determinism.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int start = 0; start < n; start += batch) {
      const int count = std::min(batch, n - start);
      std::vector<int> batch_idx(order.begin() + start,
                                 order.begin() + start + count);
      const PolicyGradients g = policy_loss_gradient(policy, data, batch_idx);
      if (!std::isfinite(g.loss)) {
        throw TrainingDiverged(
            "train_policy: non-finite loss; lower the step size");
      }
      ++step;
      const double bias1 = 1.0 - std::pow(0.9, static_cast<double>(step));
      const double bias2 = 1.0 - std::pow(0.999, static_cast<double>(step));
      s_w1.update(policy.w1, g.dw1, options.learning_rate, bias1, bias2);
      s_b1.update(policy.b1, g.db1, options.learning_rate, bias1, bias2);
      s_w2.update(policy.w2, g.dw2, options.learning_rate, bias1, bias2);
      s_b2.update(policy.b2, g.db2, options.learning_rate, bias1, bias2);
      s_w3.update(policy.w3, g.dw3, options.learning_rate, bias1, bias2);
      s_b3.update(policy.b3, g.db3, options.learning_rate, bias1, bias2);
    }
    if (options.epoch_losses != nullptr) {
      options.epoch_losses->push_back(policy_loss(policy, data));
    }
  }
  const double final_loss = policy_loss(policy, data);
  if (!std::isfinite(final_loss)) {
    throw TrainingDiverged("train_policy: non-finite loss; lower the step size");
  }
  return final_loss;
}

Eigen::Matrix2d fit_policy_covariance(const DemoDataset& data) {
  if (data.empty()) {
    throw ContractViolation("fit_policy_covariance: empty dataset");
  }
  Eigen::Matrix2d avg = Eigen::Matrix2d::Zero();
  for (const DemoRecord& rec : data.records) avg += rec.label_precision;
  avg /= static_cast<double>(data.size());
  Eigen::FullPivLU<Eigen::Matrix2d> lu(avg);
  if (!lu.isInvertible()) {
    throw NumericalError("fit_policy_covariance: singular average precision");
  }
  Eigen::Matrix2d cov = lu.inverse();
  return 0.5 * (cov + cov.transpose().eval());
}

namespace {

void print_matrix(std::string& out, const char* name,
                  const Eigen::MatrixXd& m) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %ld %ld\n", name,
                static_cast<long>(m.rows()), static_cast<long>(m.cols()));
  out += buf;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), j + 1 == m.cols() ? "%.17g" : "%.17g ",
                    m(i, j));
      out += buf;
    }
    out += '\n';
  }
}

Eigen::MatrixXd parse_matrix(std::istringstream& in, const std::string& name) {
  std::string tag;
  long rows = 0, cols = 0;
  if (!(in >> tag >> rows >> cols) || tag != name || rows < 0 || cols < 0) {
    throw NumericalError("policy snapshot: malformed block '" + name + "'");
  }
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        throw NumericalError("policy snapshot: truncated block '" + name + "'");
      }
    }
  }
  return m;
}

}  // namespace

std::string policy_to_string(const GaussianMlpPolicy& policy) {
  std::string out = "mlp_policy_snapshot v1\n";
  print_matrix(out, "w1", policy.w1);
  print_matrix(out, "b1", policy.b1);
  print_matrix(out, "w2", policy.w2);
  print_matrix(out, "b2", policy.b2);
  print_matrix(out, "w3", policy.w3);
  print_matrix(out, "b3", policy.b3);
  print_matrix(out, "norm_mean", policy.norm_mean);
  print_matrix(out, "norm_scale", policy.norm_scale);
  print_matrix(out, "covariance", policy.action_covariance);
  return out;
}

GaussianMlpPolicy policy_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string magic, version;
  in >> magic >> version;
  if (magic != "mlp_policy_snapshot" || version != "v1") {
    throw NumericalError("policy snapshot: unrecognized header");
  }
  GaussianMlpPolicy p;
  p.w1 = parse_matrix(in, "w1");
  p.b1 = parse_matrix(in, "b1");
  p.w2 = parse_matrix(in, "w2");
  p.b2 = parse_matrix(in, "b2");
  p.w3 = parse_matrix(in, "w3");
  p.b3 = parse_matrix(in, "b3");
  p.norm_mean = parse_matrix(in, "norm_mean");
  p.norm_scale = parse_matrix(in, "norm_scale");
  p.action_covariance = parse_matrix(in, "covariance");
  return p;
}

void save_policy(const GaussianMlpPolicy& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("save_policy: cannot open " + path);
  out << policy_to_string(policy);
}

GaussianMlpPolicy load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NumericalError("load_policy: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return policy_from_string(buf.str());
}

}  // namespace platonav
