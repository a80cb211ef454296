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

#include "platonav/errors.hpp"
#include "platonav/gaussian.hpp"

using namespace platonav;

namespace {

Gaussian make_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  return Gaussian(mean, cov);
}

Gaussian random_gaussian(int dim, Rng& rng) {
  Eigen::VectorXd mean(dim);
  for (int i = 0; i < dim; ++i) mean[i] = rng.normal(0.0, 2.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd cov = a * a.transpose() +
                        0.3 * Eigen::MatrixXd::Identity(dim, dim);
  return Gaussian(mean, cov);
}

double log_pdf(const Gaussian& g, const Eigen::VectorXd& x) {
  const Eigen::LLT<Eigen::MatrixXd> llt(g.covariance());
  const Eigen::VectorXd d = x - g.mean();
  const double quad = d.dot(llt.solve(d));
  const double logdet =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double dim = static_cast<double>(g.dim());
  return -0.5 * (quad + logdet + dim * std::log(2.0 * 3.14159265358979323846));
}

// Monte-Carlo oracle for D_KL(p || q): mean of ln p - ln q under p samples.
struct McKl {
  double estimate;
  double standard_error;
};

McKl monte_carlo_kl(const Gaussian& p, const Gaussian& q, int samples, Rng& rng) {
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd x = sample(p, rng);
    const double v = log_pdf(p, x) - log_pdf(q, x);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

Eigen::VectorXd scalar_vec(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

Eigen::MatrixXd scalar_mat(double v) {
  Eigen::MatrixXd m(1, 1);
  m << v;
  return m;
}

}  // namespace

TEST_CASE("kl of identical standard normals is zero") {
  const Gaussian g(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  CHECK(kl_divergence(g, g) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kl matches the closed form for shifted unit normals") {
  // KL(N(1,1) || N(0,1)) = 1/2.
  const Gaussian p(scalar_vec(1.0), scalar_mat(1.0));
  const Gaussian q(scalar_vec(0.0), scalar_mat(1.0));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng(7);
  const McKl mc = monte_carlo_kl(p, q, 1000000, rng);
  CHECK(std::abs(kl_divergence(p, q) - mc.estimate) <= 3.0 * mc.standard_error);
}

TEST_CASE("kl matches the closed form for scaled variances") {
  // KL(N(0,2) || N(0,1)) = (2 - 1 - ln 2) / 2.
  const Gaussian p(scalar_vec(0.0), scalar_mat(2.0));
  const Gaussian q(scalar_vec(0.0), scalar_mat(1.0));
  const double expected = 0.5 * (2.0 - 1.0 - std::log(2.0));
  CHECK(kl_divergence(p, q) == doctest::Approx(expected).epsilon(1e-12));

  Rng rng(11);
  const McKl mc = monte_carlo_kl(p, q, 1000000, rng);
  CHECK(std::abs(expected - mc.estimate) <= 3.0 * mc.standard_error);
}

TEST_CASE("kl of p with itself vanishes on random instances") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Gaussian p = random_gaussian(1 + static_cast<int>(rng.uniform_index(6)), rng);
    CHECK(std::abs(kl_divergence(p, p)) <= 1e-12);
  }
}

TEST_CASE("kl is invariant under joint affine reparameterization") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform_index(3));
    const Gaussian p = random_gaussian(dim, rng);
    const Gaussian q = random_gaussian(dim, rng);

    Eigen::MatrixXd a(dim, dim);
    do {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
      }
    } while (std::abs(a.determinant()) < 0.1);
    Eigen::VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b[i] = rng.normal();

    const Gaussian pt(a * p.mean() + b, a * p.covariance() * a.transpose());
    const Gaussian qt(a * q.mean() + b, a * q.covariance() * a.transpose());
    CHECK(kl_divergence(pt, qt) ==
          doctest::Approx(kl_divergence(p, q)).epsilon(1e-9));
  }
}

TEST_CASE("kl dominates the scaled mean-separation term") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform_index(5));
    const Gaussian p = random_gaussian(dim, rng);
    const Gaussian q = random_gaussian(dim, rng);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.covariance());
    const double bound = 0.5 * (p.mean() - q.mean()).squaredNorm() /
                         eig.eigenvalues().maxCoeff();
    CHECK(kl_divergence(p, q) >= bound - 1e-12);
  }
}

TEST_CASE("kl rejects dimension mismatch") {
  const Gaussian p(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  const Gaussian q(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(kl_divergence(p, q), ContractViolation);
}

TEST_CASE("gaussian construction validates its invariants") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(make_gaussian(Eigen::VectorXd::Zero(2), asym),
                  ContractViolation);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(make_gaussian(Eigen::VectorXd::Zero(2), indefinite),
                  ContractViolation);

  CHECK_THROWS_AS(make_gaussian(Eigen::VectorXd::Zero(3),
                                Eigen::MatrixXd::Identity(2, 2)),
                  ContractViolation);

  // Near-symmetric input is symmetrized, not rejected.
  Eigen::MatrixXd nearly(2, 2);
  nearly << 1.0, 0.25 + 1e-14, 0.25, 1.0;
  const Gaussian g(Eigen::VectorXd::Zero(2), nearly);
  CHECK(g.covariance()(0, 1) == doctest::Approx(g.covariance()(1, 0)));
}

TEST_CASE("sampling a vanishing covariance returns the mean") {
  const Gaussian g(Eigen::VectorXd::Ones(3),
                   1e-20 * Eigen::MatrixXd::Identity(3, 3));
  Rng rng(1);
  const Eigen::VectorXd x = sample(g, rng);
  CHECK((x - g.mean()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("sampling is deterministic in the rng state") {
  const Gaussian g = [] {
    Rng setup(9);
    return random_gaussian(3, setup);
  }();
  Rng rng_a(42), rng_b(42);
  for (int i = 0; i < 10; ++i) {
    CHECK(sample(g, rng_a) == sample(g, rng_b));
  }
}

TEST_CASE("sample mean obeys the central-limit bound") {
  const Gaussian g(scalar_vec(0.0), scalar_mat(1.0));
  Rng rng(123);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(g, rng)[0];
  CHECK(std::abs(sum / n) <= 4.0 / std::sqrt(static_cast<double>(n)));
}
