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

#ifndef PLATONAV_POLICY_HPP_
#define PLATONAV_POLICY_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platonav/gaussian.hpp"
#include "platonav/rng.hpp"

namespace platonav {

// Conditionally Gaussian learner policy: a small input -> hidden -> hidden ->
// 2 ReLU network for the mean, a constant 2x2 action covariance, and an
// observation normalizer that is part of the policy state.
class GaussianMlpPolicy {
 public:
  GaussianMlpPolicy() = default;

  // Fan-in uniform init, zero biases, identity normalizer,
  // init_covariance * I action covariance.
  static GaussianMlpPolicy initialize(int input_dim, int hidden_units,
                                      double init_covariance, Rng& rng);

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_units() const { return static_cast<int>(w1.rows()); }
  int output_dim() const { return static_cast<int>(w3.rows()); }

  // Deterministic mean network output (normalizes internally).
  Eigen::VectorXd mean(const Eigen::VectorXd& observation) const;
  // Batched means, observations as columns.
  Eigen::MatrixXd mean_batch(const Eigen::MatrixXd& observations) const;

  // Weights are plain members: training, serialization and the test oracles
  // all poke at them directly.
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;
  Eigen::VectorXd norm_mean, norm_scale;
  Eigen::MatrixXd action_covariance;  // 2x2 SPD
};

// N(network(o), action covariance); throws ContractViolation on an input
// dimension mismatch.
Gaussian policy_forward(const GaussianMlpPolicy& policy,
                        const Eigen::VectorXd& observation);

// One supervision record: the observed input, the label distribution from
// the supervisor and a sampled label action kept for ablations.
struct DemoRecord {
  Eigen::VectorXd observation;
  Eigen::Vector2d label_mean;
  Eigen::Matrix2d label_precision;
  Eigen::Vector2d label_sample;
};

// Append-only across iterations.
struct DemoDataset {
  std::vector<DemoRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  void append(DemoRecord record);
};

struct TrainOptions {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 200;
  bool update_normalizer = true;
  // When set, receives the full-dataset loss after every epoch.
  std::vector<double>* epoch_losses = nullptr;
};

struct PolicyGradients {
  double loss = 0.0;  // mean per-sample weighted loss
  Eigen::MatrixXd dw1, dw2, dw3;
  Eigen::VectorXd db1, db2, db3;
};

// Mean weighted-Euclidean loss sum_i (m* - mu(o))' P (m* - mu(o)) / n over
// the given record indices, with analytic gradients.
PolicyGradients policy_loss_gradient(const GaussianMlpPolicy& policy,
                                     const DemoDataset& data,
                                     const std::vector<int>& indices);

// Mean per-sample weighted loss over the whole dataset.
double policy_loss(const GaussianMlpPolicy& policy, const DemoDataset& data);

// Mini-batch Adam on the weighted-Euclidean objective, warm-starting from
// the policy's current parameters. Returns the final mean per-sample loss.
// Throws TrainingDiverged on a non-finite loss.
double train_policy(GaussianMlpPolicy& policy, const DemoDataset& data,
                    const TrainOptions& options, Rng& rng);

// Inverse of the average label precisions.
Eigen::Matrix2d fit_policy_covariance(const DemoDataset& data);

// Structured-text snapshot: layer shapes, flattened weights at full printed
// precision, covariance and normalizer. Loads round-trip bit-identically at
// the printed precision.
std::string policy_to_string(const GaussianMlpPolicy& policy);
GaussianMlpPolicy policy_from_string(const std::string& text);
void save_policy(const GaussianMlpPolicy& policy, const std::string& path);
GaussianMlpPolicy load_policy(const std::string& path);

}  // namespace platonav

#endif  // PLATONAV_POLICY_HPP_
