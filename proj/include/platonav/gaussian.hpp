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

#ifndef PLATONAV_GAUSSIAN_HPP_
#define PLATONAV_GAUSSIAN_HPP_

#include <Eigen/Dense>

#include "platonav/rng.hpp"

namespace platonav {

// Multivariate normal with a dense SPD covariance. Immutable after
// construction; covariances are factorized on demand (dimensions here are
// small, <= ~10).
class Gaussian {
 public:
  // Symmetrizes the covariance as (S + S^T)/2. Throws ContractViolation if
  // the input is asymmetric beyond 1e-12 relative, dimensions disagree, or
  // any eigenvalue is below 1e-10 * trace/d.
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  Eigen::Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
};

// D_KL(p || q) for Gaussians:
//   1/2 [ ln(|Sq|/|Sp|) + tr(Sq^-1 Sp) + (mq-mp)^T Sq^-1 (mq-mp) - d ].
// Throws ContractViolation on dimension mismatch, NumericalError (with a
// condition-number diagnostic) if q's covariance cannot be factorized.
double kl_divergence(const Gaussian& p, const Gaussian& q);

// mean + L z with L L^T = covariance and z standard normal from `rng`.
Eigen::VectorXd sample(const Gaussian& g, Rng& rng);

}  // namespace platonav

#endif  // PLATONAV_GAUSSIAN_HPP_
