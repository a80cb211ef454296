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

#include "platonav/gaussian.hpp"

#include <cmath>
#include <sstream>

#include "platonav/errors.hpp"

namespace platonav {

Gaussian::Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (covariance_.rows() != covariance_.cols()) {
    throw ContractViolation("gaussian: covariance must be square");
  }
  if (mean_.size() != covariance_.rows()) {
    std::ostringstream msg;
    msg << "gaussian: mean dim " << mean_.size() << " != covariance side "
        << covariance_.rows();
    throw ContractViolation(msg.str());
  }
  const double scale = covariance_.cwiseAbs().maxCoeff();
  const double asym = (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-12 * scale) {
    throw ContractViolation("gaussian: covariance asymmetric beyond 1e-12 relative");
  }
  covariance_ = 0.5 * (covariance_ + covariance_.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance_);
  const double floor =
      1e-10 * covariance_.trace() / static_cast<double>(covariance_.rows());
  if (eig.eigenvalues().minCoeff() < floor || !(floor > 0.0)) {
    std::ostringstream msg;
    msg << "gaussian: covariance not positive definite (min eigenvalue "
        << eig.eigenvalues().minCoeff() << ", floor " << floor << ")";
    throw ContractViolation(msg.str());
  }
  if (!mean_.allFinite() || !covariance_.allFinite()) {
    throw ContractViolation("gaussian: non-finite parameters");
  }
}

double kl_divergence(const Gaussian& p, const Gaussian& q) {
  if (p.dim() != q.dim()) {
    std::ostringstream msg;
    msg << "kl_divergence: dimension mismatch " << p.dim() << " vs " << q.dim();
    throw ContractViolation(msg.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt_q(q.covariance());
  if (llt_q.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.covariance());
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    std::ostringstream msg;
    msg << "kl_divergence: q covariance not invertible (condition number "
        << (lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity())
        << ")";
    throw NumericalError(msg.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt_p(p.covariance());
  if (llt_p.info() != Eigen::Success) {
    throw NumericalError("kl_divergence: p covariance not factorizable");
  }

  const auto logdet = [](const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  const double logdet_ratio = logdet(llt_q) - logdet(llt_p);
  const double trace_term = llt_q.solve(p.covariance()).trace();
  const Eigen::VectorXd diff = q.mean() - p.mean();
  const double quad_term = diff.dot(llt_q.solve(diff));
  const double d = static_cast<double>(p.dim());
  return 0.5 * (logdet_ratio + trace_term + quad_term - d);
}

Eigen::VectorXd sample(const Gaussian& g, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(g.covariance());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("sample: covariance factorization failed");
  }
  Eigen::VectorXd z(g.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return g.mean() + llt.matrixL() * z;
}

}  // namespace platonav
