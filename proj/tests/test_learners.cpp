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
#include "platonav/learners.hpp"

using namespace platonav;

namespace {

// Small, fast configuration for loop-behavior tests.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.method = "plato";
  cfg.iterations = 2;
  cfg.steps_per_iteration = 30;
  cfg.master_seed = 7;
  cfg.eval_episodes = 2;
  cfg.eval_max_steps = 40;
  cfg.env.generator = "forest";
  cfg.env.forest.extent = 12.0;
  cfg.env.forest.avg_spacing = 4.0;
  cfg.env.forest.spawn_clear_radius = 2.5;
  cfg.cost.target_speed = 1.2;
  cfg.cost.d_safe = 0.8;
  cfg.mpc.horizon = 8;
  cfg.mpc.max_iterations = 5;
  cfg.mpc.lambda = 5.0;
  cfg.policy.hidden_units = 16;
  cfg.policy.epochs = 10;
  cfg.policy.batch_size = 32;
  return cfg;
}

bool same_policy(const GaussianMlpPolicy& a, const GaussianMlpPolicy& b) {
  return a.w1 == b.w1 && a.w2 == b.w2 && a.w3 == b.w3 && a.b1 == b.b1 &&
         a.b2 == b.b2 && a.b3 == b.b3 && a.norm_mean == b.norm_mean &&
         a.norm_scale == b.norm_scale &&
         a.action_covariance == b.action_covariance;
}

bool same_metrics(const IterationMetrics& a, const IterationMetrics& b) {
  return a.crashes == b.crashes && a.planner_faults == b.planner_faults &&
         a.steps == b.steps && a.step_kls == b.step_kls &&
         a.cost_sum_raw == b.cost_sum_raw &&
         a.cost_sum_normalized == b.cost_sum_normalized;
}

bool same_dataset(const DemoDataset& a, const DemoDataset& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.records[i].observation != b.records[i].observation) return false;
    if (a.records[i].label_mean != b.records[i].label_mean) return false;
    if (a.records[i].label_precision != b.records[i].label_precision) {
      return false;
    }
    if (a.records[i].label_sample != b.records[i].label_sample) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("beta schedules reproduce the published values") {
  // linear-full, N = 5: beta = (1, 0.75, 0.5, 0.25, 0).
  BetaSchedule full{BetaVariant::kLinearFull, 5};
  const double expected_full[] = {1.0, 0.75, 0.5, 0.25, 0.0};
  for (int i = 1; i <= 5; ++i) {
    CHECK(beta_value(full, i) == doctest::Approx(expected_full[i - 1]));
  }

  // linear-half, N = 10: interpolates 1 -> 0 over iterations 1..5, then 0.
  BetaSchedule half{BetaVariant::kLinearHalf, 10};
  const double expected_half[] = {1.0, 0.75, 0.5, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (int i = 1; i <= 10; ++i) {
    CHECK(beta_value(half, i) == doctest::Approx(expected_half[i - 1]));
  }

  // linear-quarter, N = 20: reaches 0 at iteration 5.
  BetaSchedule quarter{BetaVariant::kLinearQuarter, 20};
  CHECK(beta_value(quarter, 1) == doctest::Approx(1.0));
  CHECK(beta_value(quarter, 3) == doctest::Approx(0.5));
  CHECK(beta_value(quarter, 5) == doctest::Approx(0.0));
  CHECK(beta_value(quarter, 20) == doctest::Approx(0.0));

  // one-zero: 1[i = 1].
  BetaSchedule onezero{BetaVariant::kOneZero, 6};
  CHECK(beta_value(onezero, 1) == 1.0);
  CHECK(beta_value(onezero, 2) == 0.0);
  CHECK(beta_value(onezero, 6) == 0.0);

  // Any schedule starts at 1.
  for (const BetaVariant v :
       {BetaVariant::kLinearFull, BetaVariant::kLinearHalf,
        BetaVariant::kLinearQuarter, BetaVariant::kOneZero}) {
    CHECK(beta_value(BetaSchedule{v, 9}, 1) == 1.0);
  }

  CHECK_THROWS_AS(beta_value(full, 0), ContractViolation);
  CHECK_THROWS_AS(beta_value(full, 6), ContractViolation);
}

TEST_CASE("zero iterations return the initial policy and empty data") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 0;
  const TrainingRun run = run_plato(cfg);
  CHECK(run.dataset.empty());
  CHECK(run.metrics.empty());
  CHECK(run.snapshots.empty());

  // The initial policy is reproducible from the same seed fan-out.
  Rng init = Rng::stream(cfg.master_seed, 6);
  SensorConfig sensors = cfg.env.sensors;
  const int obs_dim = observation_dim(sensors, false);
  const GaussianMlpPolicy expected = GaussianMlpPolicy::initialize(
      obs_dim, cfg.policy.hidden_units, cfg.policy.init_covariance, init);
  CHECK(same_policy(run.final_policy, expected));
}

TEST_CASE("plato with zero lambda matches supervised bit for bit") {
  ExperimentConfig cfg = tiny_config();
  cfg.mpc.lambda = 0.0;
  const TrainingRun plato = run_plato(cfg);
  const TrainingRun supervised = run_supervised(cfg);
  REQUIRE(plato.metrics.size() == supervised.metrics.size());
  for (std::size_t i = 0; i < plato.metrics.size(); ++i) {
    CHECK(same_metrics(plato.metrics[i], supervised.metrics[i]));
  }
  CHECK(same_dataset(plato.dataset, supervised.dataset));
  CHECK(same_policy(plato.final_policy, supervised.final_policy));
}

TEST_CASE("plato never executes the learner; supervised never the teacher") {
  ExperimentConfig cfg = tiny_config();
  const TrainingRun plato = run_plato(cfg);
  for (const IterationMetrics& m : plato.metrics) {
    CHECK(m.executed_by(ActionSource::kLearner) == 0);
    CHECK(m.executed_by(ActionSource::kTeacher) == m.steps);
    CHECK(static_cast<int>(m.action_log.size()) == m.steps);
  }
  const TrainingRun supervised = run_supervised(cfg);
  for (const IterationMetrics& m : supervised.metrics) {
    CHECK(m.executed_by(ActionSource::kLearner) == 0);
    CHECK(m.executed_by(ActionSource::kStar) == m.steps);
  }
}

TEST_CASE("dagger executes only the learner once beta hits zero") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 2;
  const BetaSchedule onezero{BetaVariant::kOneZero, 2};
  const TrainingRun run = run_dagger(cfg, onezero);
  REQUIRE(run.metrics.size() == 2);
  CHECK(run.metrics[0].executed_by(ActionSource::kStar) == run.metrics[0].steps);
  CHECK(run.metrics[1].executed_by(ActionSource::kLearner) ==
        run.metrics[1].steps);
}

TEST_CASE("dagger one-zero matches supervised in its first iteration") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 1;
  const TrainingRun dagger = run_dagger(cfg, BetaSchedule{BetaVariant::kOneZero, 1});
  const TrainingRun supervised = run_supervised(cfg);
  REQUIRE(dagger.metrics.size() == 1);
  CHECK(same_metrics(dagger.metrics[0], supervised.metrics[0]));
  CHECK(same_dataset(dagger.dataset, supervised.dataset));
}

TEST_CASE("coaching with zero lambda equals dagger bit for bit") {
  ExperimentConfig cfg = tiny_config();
  cfg.mpc.lambda = 0.0;
  const BetaSchedule schedule{BetaVariant::kLinearFull, 2};
  const TrainingRun coaching = run_coaching(cfg, schedule);
  const TrainingRun dagger = run_dagger(cfg, schedule);
  REQUIRE(coaching.metrics.size() == dagger.metrics.size());
  for (std::size_t i = 0; i < coaching.metrics.size(); ++i) {
    CHECK(same_metrics(coaching.metrics[i], dagger.metrics[i]));
  }
  CHECK(same_dataset(coaching.dataset, dagger.dataset));
  CHECK(same_policy(coaching.final_policy, dagger.final_policy));
}

TEST_CASE("coaching labels chase the learner at huge lambda") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 1;
  cfg.steps_per_iteration = 12;
  cfg.mpc.lambda = 1e8;
  const TrainingRun run =
      run_coaching(cfg, BetaSchedule{BetaVariant::kLinearFull, 1});

  // Recompute the (fixed, iteration-1) policy means at the logged
  // observations; the labels must be within 1e-3.
  Rng init = Rng::stream(cfg.master_seed, 6);
  const int obs_dim = observation_dim(cfg.env.sensors, false);
  const GaussianMlpPolicy initial = GaussianMlpPolicy::initialize(
      obs_dim, cfg.policy.hidden_units, cfg.policy.init_covariance, init);
  for (const DemoRecord& rec : run.dataset.records) {
    const Eigen::Vector2d mu = initial.mean(rec.observation);
    CHECK((rec.label_mean - mu).cwiseAbs().maxCoeff() <= 1e-3);
  }
}

TEST_CASE("coaching labels differ from dagger labels at positive lambda") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 1;
  cfg.mpc.lambda = 50.0;
  const BetaSchedule schedule{BetaVariant::kLinearFull, 1};
  const TrainingRun coaching = run_coaching(cfg, schedule);
  const TrainingRun dagger = run_dagger(cfg, schedule);
  CHECK_FALSE(same_dataset(coaching.dataset, dagger.dataset));
}

TEST_CASE("training runs are deterministic in the master seed") {
  ExperimentConfig cfg = tiny_config();
  cfg.method = "dagger";
  cfg.beta_schedule = "linear-full";
  const TrainingRun a = run_method(cfg);
  const TrainingRun b = run_method(cfg);
  REQUIRE(a.metrics.size() == b.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) {
    CHECK(same_metrics(a.metrics[i], b.metrics[i]));
    CHECK(a.metrics[i].action_log == b.metrics[i].action_log);
  }
  CHECK(same_dataset(a.dataset, b.dataset));
  CHECK(same_policy(a.final_policy, b.final_policy));

  ExperimentConfig other = cfg;
  other.master_seed = 8;
  const TrainingRun c = run_method(other);
  CHECK_FALSE(same_dataset(a.dataset, c.dataset));
}

TEST_CASE("per-step KL is finite and logged for every step") {
  ExperimentConfig cfg = tiny_config();
  const TrainingRun run = run_plato(cfg);
  for (const IterationMetrics& m : run.metrics) {
    CHECK(m.step_kls.size() == static_cast<std::size_t>(m.steps));
    for (const double kl : m.step_kls) {
      CHECK(std::isfinite(kl));
      CHECK(kl >= -1e-9);
    }
    CHECK(m.kl_exceed_fraction(1e12) == 0.0);
    CHECK(m.kl_exceed_fraction(-1.0) == 1.0);
  }
}

TEST_CASE("the dataset grows by T records per iteration") {
  ExperimentConfig cfg = tiny_config();
  const TrainingRun run = run_plato(cfg);
  CHECK(run.dataset.size() ==
        static_cast<std::size_t>(cfg.iterations * cfg.steps_per_iteration));
  CHECK(run.snapshots.size() == static_cast<std::size_t>(cfg.iterations));
}

TEST_CASE("switch schedules pick the generator per iteration") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 6;
  cfg.env.switch_schedule = {{1, "canyon"}, {3, "forest"}, {5, "canyon"}};
  CHECK(field_for_iteration(cfg, 1).kind == ObstacleField::Kind::kCanyon);
  CHECK(field_for_iteration(cfg, 2).kind == ObstacleField::Kind::kCanyon);
  CHECK(field_for_iteration(cfg, 3).kind == ObstacleField::Kind::kForest);
  CHECK(field_for_iteration(cfg, 4).kind == ObstacleField::Kind::kForest);
  CHECK(field_for_iteration(cfg, 5).kind == ObstacleField::Kind::kCanyon);
  // Deterministic per iteration.
  CHECK(export_geometry(field_for_iteration(cfg, 3)) ==
        export_geometry(field_for_iteration(cfg, 3)));
  // Fresh seeds across iterations.
  CHECK(export_geometry(field_for_iteration(cfg, 3)) !=
        export_geometry(field_for_iteration(cfg, 4)));
}

TEST_CASE("command conditioning widens the observation") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 1;
  cfg.steps_per_iteration = 15;
  cfg.cost.command_conditioned = true;
  const TrainingRun run = run_plato(cfg);
  const int expected = observation_dim(cfg.env.sensors, true);
  for (const DemoRecord& rec : run.dataset.records) {
    CHECK(rec.observation.size() == expected);
  }
  CHECK(run.final_policy.input_dim() == expected);
}

TEST_CASE("full-state observation mode feeds the state to the learner") {
  ExperimentConfig cfg = tiny_config();
  cfg.iterations = 1;
  cfg.steps_per_iteration = 10;
  cfg.observation_mode = "full-state";
  const TrainingRun run = run_plato(cfg);
  for (const DemoRecord& rec : run.dataset.records) {
    CHECK(rec.observation.size() == 6);
  }
}
