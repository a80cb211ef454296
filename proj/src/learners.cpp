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

#include "platonav/learners.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "platonav/errors.hpp"

namespace platonav {

namespace {

// Stream ids for fanning the master seed out into independent rngs. Each
// concern draws from its own stream so that methods which skip a draw (e.g.
// supervised never draws a mixing Bernoulli) still see identical streams
// everywhere else.
enum StreamId : std::uint64_t {
  kStreamWorld = 1,
  kStreamEnvNoise = 2,
  kStreamExec = 3,
  kStreamLabel = 4,
  kStreamMix = 5,
  kStreamPolicyInit = 6,
  kStreamTrain = 7,
  kStreamCommand = 8,
  kStreamEval = 100,  // + iteration, used by the eval harness
};

struct MethodTraits {
  bool plans_teacher;   // needs the KL-penalized plan
  bool mixture_exec;    // executes the DAgger-style mixture
  bool labels_from_teacher;
};

MethodTraits traits_for(Method method) {
  switch (method) {
    case Method::kPlato:
      return {true, false, false};
    case Method::kSupervised:
      return {true, false, false};  // teacher plan runs with lambda = 0
    case Method::kDagger:
      return {false, true, false};
    case Method::kCoaching:
      return {true, true, true};
  }
  return {false, false, false};
}

Eigen::Matrix2d precision_of(const Gaussian& g) {
  return Eigen::LLT<Eigen::Matrix2d>(g.covariance())
      .solve(Eigen::Matrix2d::Identity());
}

std::optional<Vec2> sample_command(const CostConfig& cost, Rng& rng) {
  if (!cost.command_conditioned) return std::nullopt;
  return Vec2(rng.uniform(cost.command_forward_min, cost.command_forward_max),
              rng.uniform(-cost.command_side, cost.command_side));
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "plato") return Method::kPlato;
  if (name == "dagger") return Method::kDagger;
  if (name == "coaching") return Method::kCoaching;
  if (name == "supervised") return Method::kSupervised;
  throw ConfigError("unknown method: " + name);
}

BetaVariant beta_variant_from_string(const std::string& name) {
  if (name == "linear-full") return BetaVariant::kLinearFull;
  if (name == "linear-half") return BetaVariant::kLinearHalf;
  if (name == "linear-quarter") return BetaVariant::kLinearQuarter;
  if (name == "one-zero") return BetaVariant::kOneZero;
  throw ConfigError("unknown beta schedule: " + name);
}

double beta_value(const BetaSchedule& schedule, int i) {
  const int n = schedule.total_iterations;
  if (i < 1 || i > n) {
    throw ContractViolation("beta_value: iteration out of range");
  }
  if (schedule.variant == BetaVariant::kOneZero) return i == 1 ? 1.0 : 0.0;
  int zero_at = n;
  if (schedule.variant == BetaVariant::kLinearHalf) zero_at = (n + 1) / 2;
  if (schedule.variant == BetaVariant::kLinearQuarter) zero_at = (n + 3) / 4;
  if (zero_at <= 1) return i == 1 ? 1.0 : 0.0;
  return std::max(0.0, static_cast<double>(zero_at - i) /
                           static_cast<double>(zero_at - 1));
}

double IterationMetrics::mean_kl() const {
  if (step_kls.empty()) return 0.0;
  double sum = 0.0;
  for (const double k : step_kls) sum += k;
  return sum / static_cast<double>(step_kls.size());
}

double IterationMetrics::kl_exceed_fraction(double epsilon) const {
  if (step_kls.empty()) return 0.0;
  int count = 0;
  for (const double k : step_kls) {
    if (k > epsilon) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(step_kls.size());
}

int IterationMetrics::executed_by(ActionSource source) const {
  return static_cast<int>(
      std::count(action_log.begin(), action_log.end(), source));
}

ObstacleField field_for_iteration(const ExperimentConfig& config, int iteration) {
  std::string generator = config.env.generator;
  for (const auto& [start, gen] : config.env.switch_schedule) {
    if (iteration >= start) generator = gen;
  }
  Rng seeder = Rng::stream(config.master_seed,
                           kStreamWorld * 1000003ull +
                               static_cast<std::uint64_t>(iteration));
  const std::uint64_t field_seed = seeder.next_u64();
  if (generator == "canyon") return generate_canyon(field_seed, config.env.canyon);
  if (generator == "forest") return generate_forest(field_seed, config.env.forest);
  ObstacleField field;
  field.kind = ObstacleField::Kind::kEmpty;
  field.seed = field_seed;
  return field;
}

namespace {

TrainingRun run_engine(const ExperimentConfig& config, Method method,
                       const BetaSchedule* schedule) {
  validate_config(config);
  const MethodTraits traits = traits_for(method);
  const double lambda = method == Method::kSupervised ? 0.0 : config.mpc.lambda;

  SensorConfig sensors = config.env.sensors;
  sensors.full_state = config.observation_mode == "full-state";
  const int obs_dim = observation_dim(sensors, config.cost.command_conditioned);

  Rng world_rng = Rng::stream(config.master_seed, kStreamWorld);
  Rng env_rng = Rng::stream(config.master_seed, kStreamEnvNoise);
  Rng exec_rng = Rng::stream(config.master_seed, kStreamExec);
  Rng label_rng = Rng::stream(config.master_seed, kStreamLabel);
  Rng mix_rng = Rng::stream(config.master_seed, kStreamMix);
  Rng init_rng = Rng::stream(config.master_seed, kStreamPolicyInit);
  Rng train_rng = Rng::stream(config.master_seed, kStreamTrain);
  Rng command_rng = Rng::stream(config.master_seed, kStreamCommand);

  TrainingRun run;
  run.final_policy = GaussianMlpPolicy::initialize(
      obs_dim, config.policy.hidden_units, config.policy.init_covariance,
      init_rng);
  GaussianMlpPolicy& policy = run.final_policy;

  const VehicleDynamicsModel dynamics(config.env.dt);
  TrainOptions train_options;
  train_options.learning_rate = config.policy.learning_rate;
  train_options.batch_size = config.policy.batch_size;
  train_options.epochs = config.policy.epochs;

  for (int iteration = 1; iteration <= config.iterations; ++iteration) {
    const ObstacleField field = field_for_iteration(config, iteration);
    const double beta =
        schedule != nullptr ? beta_value(*schedule, iteration) : 1.0;

    IterationMetrics metrics;
    metrics.iteration = iteration;

    SpawnPose spawn = respawn(field, 2.0 * config.cost.d_safe, world_rng);
    VehicleState state;
    state.position = spawn.position;
    state.heading = spawn.heading;

    std::optional<Vec2> command = sample_command(config.cost, command_rng);
    TaskCost task = config.cost.to_task_cost();
    if (command.has_value()) task.target_linear_velocity = *command;

    // Receding-horizon warm starts; dropped on respawn.
    std::optional<LinearGaussianController> teacher_warm;
    std::optional<LinearGaussianController> star_warm;

    for (int t = 0; t < config.steps_per_iteration; ++t) {
      const Observation obs = observe(field, state, sensors, command, env_rng);
      const Eigen::VectorXd obs_vec = obs.flatten();
      const Gaussian learner_dist = policy_forward(policy, obs_vec);

      const VehicleStageCost cost_model(task, field, config.cost.terminal_weight);
      const Eigen::VectorXd x = state.to_vector();

      // The unpenalized supervisor (labels for plato/dagger/supervised and
      // the expert branch of the mixture).
      std::optional<Gaussian> star_dist;
      try {
        PlanResult star =
            mpc_star_plan(x, cost_model, dynamics, config.mpc,
                          star_warm.has_value() ? &*star_warm : nullptr);
        star_dist = star.action;
        star_warm = star.controller.time_shifted();
      } catch (const NumericalError&) {
        ++metrics.planner_faults;
        if (star_warm.has_value()) {
          star_dist = star_warm->action_distribution(0, x);
          star_warm = star_warm->time_shifted();
        } else {
          star_dist = Gaussian(Eigen::Vector2d::Zero(),
                               config.policy.init_covariance *
                                   Eigen::Matrix2d::Identity());
        }
      }

      // The KL-penalized teacher, where the method calls for it.
      std::optional<Gaussian> teacher_dist;
      if (traits.plans_teacher) {
        MpcConfig teacher_cfg = config.mpc;
        teacher_cfg.lambda = lambda;
        try {
          PlanResult teacher = mpc_teacher_plan(
              x, learner_dist, cost_model, dynamics, teacher_cfg,
              teacher_warm.has_value() ? &*teacher_warm : nullptr);
          teacher_dist = teacher.action;
          teacher_warm = teacher.controller.time_shifted();
        } catch (const NumericalError&) {
          ++metrics.planner_faults;
          if (teacher_warm.has_value()) {
            teacher_dist = teacher_warm->action_distribution(0, x);
            teacher_warm = teacher_warm->time_shifted();
          } else {
            teacher_dist = star_dist;
          }
        }
      }

      // Executed action.
      Eigen::VectorXd action;
      ActionSource source;
      if (traits.mixture_exec) {
        const bool expert = mix_rng.bernoulli(beta);
        if (expert) {
          action = sample(*star_dist, exec_rng);
          source = ActionSource::kStar;
        } else {
          action = sample(learner_dist, exec_rng);
          source = ActionSource::kLearner;
        }
      } else {
        action = sample(*teacher_dist, exec_rng);
        source = method == Method::kSupervised ? ActionSource::kStar
                                               : ActionSource::kTeacher;
      }

      // Supervision label.
      const Gaussian& label_dist =
          traits.labels_from_teacher ? *teacher_dist : *star_dist;
      DemoRecord record;
      record.observation = obs_vec;
      record.label_mean = label_dist.mean();
      record.label_precision = precision_of(label_dist);
      record.label_sample = sample(label_dist, label_rng);
      run.dataset.append(std::move(record));

      // Realized divergence between the executing planner and the learner.
      const Gaussian& monitored =
          teacher_dist.has_value() ? *teacher_dist : *star_dist;
      metrics.step_kls.push_back(kl_divergence(monitored, learner_dist));
      metrics.action_log.push_back(source);

      const ControlInput input = config.env.control_bounds.clamp(action);
      metrics.cost_sum_raw += stage_cost(task, field, state, input);
      metrics.cost_sum_normalized +=
          normalized_stage_cost(task, field, state, input, config.cost.cost_scale);
      ++metrics.steps;

      state = step(state, input, config.env.dt, config.env.control_noise, env_rng);

      bool moved = false;
      if (crash_check(field, state.position, config.env.vehicle_radius)) {
        ++metrics.crashes;
        moved = true;
      } else if (!field.extent.contains(state.position)) {
        moved = true;  // left the world; not a crash
      }
      if (moved) {
        spawn = respawn(field, 2.0 * config.cost.d_safe, world_rng);
        state = VehicleState{};
        state.position = spawn.position;
        state.heading = spawn.heading;
        teacher_warm.reset();
        star_warm.reset();
      }

      if (command.has_value() &&
          (state.linear_velocity - *command).norm() <= config.cost.command_tolerance) {
        command = sample_command(config.cost, command_rng);
        task.target_linear_velocity = *command;
      }
    }

    metrics.train_loss = train_policy(policy, run.dataset, train_options, train_rng);
    if (config.policy.fixed_covariance > 0.0) {
      policy.action_covariance =
          config.policy.fixed_covariance * Eigen::MatrixXd::Identity(2, 2);
    } else {
      policy.action_covariance = fit_policy_covariance(run.dataset);
    }

    run.metrics.push_back(std::move(metrics));
    run.snapshots.push_back(policy);
  }
  return run;
}

}  // namespace

TrainingRun run_plato(const ExperimentConfig& config) {
  return run_engine(config, Method::kPlato, nullptr);
}

TrainingRun run_dagger(const ExperimentConfig& config,
                       const BetaSchedule& schedule) {
  return run_engine(config, Method::kDagger, &schedule);
}

TrainingRun run_coaching(const ExperimentConfig& config,
                         const BetaSchedule& schedule) {
  return run_engine(config, Method::kCoaching, &schedule);
}

TrainingRun run_supervised(const ExperimentConfig& config) {
  return run_engine(config, Method::kSupervised, nullptr);
}

TrainingRun run_method(const ExperimentConfig& config) {
  const Method method = method_from_string(config.method);
  if (method == Method::kDagger || method == Method::kCoaching) {
    BetaSchedule schedule;
    schedule.variant = beta_variant_from_string(config.beta_schedule);
    schedule.total_iterations = std::max(1, config.iterations);
    return run_engine(config, method, &schedule);
  }
  return run_engine(config, method, nullptr);
}

}  // namespace platonav
