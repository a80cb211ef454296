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

#ifndef PLATONAV_LEARNERS_HPP_
#define PLATONAV_LEARNERS_HPP_

#include <string>
#include <vector>

#include "platonav/config.hpp"
#include "platonav/policy.hpp"

namespace platonav {

enum class Method { kPlato, kDagger, kCoaching, kSupervised };

Method method_from_string(const std::string& name);

enum class BetaVariant { kLinearFull, kLinearHalf, kLinearQuarter, kOneZero };

struct BetaSchedule {
  BetaVariant variant = BetaVariant::kLinearFull;
  int total_iterations = 1;
};

BetaVariant beta_variant_from_string(const std::string& name);

// Mixing weight at iteration i (1-based). Linear variants interpolate from 1
// at i = 1 to 0 at iteration N, ceil(N/2) or ceil(N/4); one-zero is
// 1[i == 1].
double beta_value(const BetaSchedule& schedule, int i);

// Who produced an executed action.
enum class ActionSource : std::uint8_t { kTeacher, kStar, kLearner };

struct IterationMetrics {
  int iteration = 0;
  int crashes = 0;
  int planner_faults = 0;
  int steps = 0;
  std::vector<double> step_kls;              // realized KL(teacher || learner)
  std::vector<ActionSource> action_log;      // provenance, one per step
  double cost_sum_raw = 0.0;                 // executed stage costs
  double cost_sum_normalized = 0.0;          // squashed variant in [0, 1]
  double train_loss = 0.0;                   // after this iteration's training

  double mean_kl() const;
  double kl_exceed_fraction(double epsilon) const;
  int executed_by(ActionSource source) const;
};

struct TrainingRun {
  std::vector<IterationMetrics> metrics;
  std::vector<GaussianMlpPolicy> snapshots;  // policy after each iteration
  GaussianMlpPolicy final_policy;
  DemoDataset dataset;
};

// Algorithm: per step, optimize the KL-penalized teacher, sample and execute
// its action, optimize the unpenalized supervisor, record the label; train
// on the aggregate after each iteration. The learner's action is never
// executed.
TrainingRun run_plato(const ExperimentConfig& config);

// Executes a per-step Bernoulli(beta_i) mixture of supervisor and learner
// actions; labels always come from the supervisor.
TrainingRun run_dagger(const ExperimentConfig& config,
                       const BetaSchedule& schedule);

// Mixture execution as run_dagger; labels come from the KL-penalized teacher.
TrainingRun run_coaching(const ExperimentConfig& config,
                         const BetaSchedule& schedule);

// Executes and labels with the unpenalized supervisor.
TrainingRun run_supervised(const ExperimentConfig& config);

// Dispatch on config.method (+ config.beta_schedule where it applies).
TrainingRun run_method(const ExperimentConfig& config);

// The obstacle field used at iteration i (1-based): the switch schedule's
// generator if one is configured, else config.env.generator, seeded
// deterministically from the master seed and iteration.
ObstacleField field_for_iteration(const ExperimentConfig& config, int iteration);

}  // namespace platonav

#endif  // PLATONAV_LEARNERS_HPP_
