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

#include "platonav/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "platonav/errors.hpp"
#include "platonav/observation.hpp"

namespace platonav {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::optional<Vec2> sample_eval_command(const CostConfig& cost, Rng& rng) {
  if (!cost.command_conditioned) return std::nullopt;
  return Vec2(rng.uniform(cost.command_forward_min, cost.command_forward_max),
              rng.uniform(-cost.command_side, cost.command_side));
}

}  // namespace

EvaluationResult evaluate_policy(const GaussianMlpPolicy& policy,
                                 const ExperimentConfig& config, int episodes,
                                 int max_steps, Rng& rng) {
  if (episodes < 1) {
    throw ContractViolation("evaluate_policy: episodes must be >= 1");
  }
  SensorConfig sensors = config.env.sensors;
  sensors.full_state = config.observation_mode == "full-state";

  EvaluationResult result;
  int crashed_episodes = 0;
  for (int e = 0; e < episodes; ++e) {
    const std::uint64_t field_seed = rng.next_u64();
    ObstacleField field;
    if (config.env.generator == "canyon") {
      field = generate_canyon(field_seed, config.env.canyon);
    } else if (config.env.generator == "forest") {
      field = generate_forest(field_seed, config.env.forest);
    }

    SpawnPose spawn = respawn(field, 2.0 * config.cost.d_safe, rng);
    VehicleState state;
    state.position = spawn.position;
    state.heading = spawn.heading;

    std::optional<Vec2> command = sample_eval_command(config.cost, rng);
    TaskCost task = config.cost.to_task_cost();
    if (command.has_value()) task.target_linear_velocity = *command;

    // Episodes start in flight at the task speed along the spawn heading;
    // the policy is measured on flying through the scenario, not on getting
    // under way.
    const double task_speed = task.target_linear_velocity.norm();
    state.linear_velocity =
        task_speed * Vec2(std::cos(spawn.heading), std::sin(spawn.heading));

    int steps_survived = 0;
    bool crashed = false;
    for (int t = 0; t < max_steps; ++t) {
      const Observation obs = observe(field, state, sensors, command, rng);
      const Eigen::VectorXd action = policy.mean(obs.flatten());
      const ControlInput input = config.env.control_bounds.clamp(action);
      state = step(state, input, config.env.dt, config.env.control_noise, rng);
      ++steps_survived;
      if (crash_check(field, state.position, config.env.vehicle_radius)) {
        crashed = true;
        break;
      }
      if (!field.extent.contains(state.position)) {
        spawn = respawn(field, 2.0 * config.cost.d_safe, rng);
        state = VehicleState{};
        state.position = spawn.position;
        state.heading = spawn.heading;
        state.linear_velocity = task_speed * Vec2(std::cos(spawn.heading),
                                                  std::sin(spawn.heading));
      }
      if (command.has_value() &&
          (state.linear_velocity - *command).norm() <=
              config.cost.command_tolerance) {
        command = sample_eval_command(config.cost, rng);
        task.target_linear_velocity = *command;
      }
    }
    result.survival_times.push_back(steps_survived * config.env.dt);
    if (crashed) ++crashed_episodes;
  }
  double sum = 0.0;
  for (const double s : result.survival_times) sum += s;
  result.mttf = sum / static_cast<double>(result.survival_times.size());
  result.crash_rate =
      static_cast<double>(crashed_episodes) / static_cast<double>(episodes);
  return result;
}

std::string metrics_to_csv(const std::vector<MetricsRecord>& records) {
  std::string out =
      "iteration,training_crashes,planner_faults,mean_step_kl,"
      "kl_exceed_fraction,mean_step_cost,eval_mttf_s,eval_crash_rate,snapshot\n";
  for (const MetricsRecord& r : records) {
    out += std::to_string(r.iteration);
    out += ',';
    out += std::to_string(r.training_crashes);
    out += ',';
    out += std::to_string(r.planner_faults);
    out += ',';
    out += fmt(r.mean_step_kl);
    out += ',';
    out += fmt(r.kl_exceed_fraction);
    out += ',';
    out += fmt(r.mean_step_cost);
    out += ',';
    out += fmt(r.eval_mttf);
    out += ',';
    out += fmt(r.eval_crash_rate);
    out += ',';
    out += r.snapshot_file;
    out += '\n';
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir, bool quiet) {
  validate_config(config);
  std::filesystem::create_directories(out_dir);

  ExperimentResult result;
  const auto run_start = std::chrono::steady_clock::now();
  result.run = run_method(config);
  const auto train_end = std::chrono::steady_clock::now();
  if (!quiet) {
    std::cout << "[" << config.method << "] training finished in "
              << std::chrono::duration<double>(train_end - run_start).count()
              << " s over " << config.iterations << " iterations\n";
  }

  for (std::size_t i = 0; i < result.run.metrics.size(); ++i) {
    const IterationMetrics& m = result.run.metrics[i];
    const auto iter_start = std::chrono::steady_clock::now();

    char name[64];
    std::snprintf(name, sizeof(name), "policy_iter_%03d.txt", m.iteration);
    const std::string snapshot_path =
        (std::filesystem::path(out_dir) / name).string();
    save_policy(result.run.snapshots[i], snapshot_path);

    Rng eval_rng = Rng::stream(config.master_seed,
                               100 + static_cast<std::uint64_t>(m.iteration));
    const EvaluationResult eval =
        evaluate_policy(result.run.snapshots[i], config, config.eval_episodes,
                        config.eval_max_steps, eval_rng);

    MetricsRecord record;
    record.iteration = m.iteration;
    record.training_crashes = m.crashes;
    record.planner_faults = m.planner_faults;
    record.mean_step_kl = m.mean_kl();
    record.kl_exceed_fraction = m.kl_exceed_fraction(config.epsilon_kl);
    record.mean_step_cost =
        m.steps > 0 ? m.cost_sum_normalized / static_cast<double>(m.steps) : 0.0;
    record.eval_mttf = eval.mttf;
    record.eval_crash_rate = eval.crash_rate;
    record.snapshot_file = name;
    record.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      iter_start)
            .count();
    if (!quiet) {
      std::cout << "  iter " << m.iteration << ": crashes " << m.crashes
                << ", mean KL " << record.mean_step_kl << ", MTTF "
                << record.eval_mttf << " s (eval took "
                << record.wall_clock_seconds << " s)\n";
    }
    result.records.push_back(std::move(record));
  }

  result.metrics_path =
      (std::filesystem::path(out_dir) / "metrics.csv").string();
  std::ofstream csv(result.metrics_path, std::ios::binary);
  if (!csv) throw ConfigError("cannot write " + result.metrics_path);
  csv << metrics_to_csv(result.records);
  return result;
}

std::vector<LambdaSummary> lambda_sweep(const ExperimentConfig& base_config,
                                        const std::vector<double>& lambdas,
                                        const std::string& out_dir) {
  if (lambdas.empty()) {
    throw ContractViolation("lambda_sweep: empty lambda list");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<LambdaSummary> summaries(lambdas.size());
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(lambdas.size());

  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        ExperimentConfig config = base_config;
        config.mpc.lambda = lambdas[i];
        char sub[32];
        std::snprintf(sub, sizeof(sub), "lambda_%02zu", i);
        const ExperimentResult res = run_experiment(
            config, (std::filesystem::path(out_dir) / sub).string(),
            /*quiet=*/true);

        LambdaSummary& s = summaries[i];
        s.lambda = lambdas[i];
        double cost_sum = 0.0, kl_sum = 0.0;
        long steps = 0, kls = 0;
        for (const IterationMetrics& m : res.run.metrics) {
          s.training_crashes += m.crashes;
          cost_sum += m.cost_sum_raw;
          steps += m.steps;
          for (const double k : m.step_kls) kl_sum += k;
          kls += static_cast<long>(m.step_kls.size());
        }
        s.teacher_cost = steps > 0 ? cost_sum / static_cast<double>(steps) : 0.0;
        s.mean_kl = kls > 0 ? kl_sum / static_cast<double>(kls) : 0.0;
        s.final_mttf = res.records.empty() ? 0.0 : res.records.back().eval_mttf;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::ofstream csv(std::filesystem::path(out_dir) / "sweep.csv",
                    std::ios::binary);
  csv << "lambda,teacher_cost,training_crashes,final_mttf_s,mean_step_kl\n";
  for (const LambdaSummary& s : summaries) {
    csv << fmt(s.lambda) << ',' << fmt(s.teacher_cost) << ','
        << s.training_crashes << ',' << fmt(s.final_mttf) << ','
        << fmt(s.mean_kl) << '\n';
  }
  return summaries;
}

std::string sparkline(const std::vector<double>& values) {
  static const char* kLevels[] = {"▁", "▂", "▃", "▄",
                                  "▅", "▆", "▇", "█"};
  if (values.empty()) return "";
  double lo = values.front(), hi = values.front();
  for (const double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::string out;
  for (const double v : values) {
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    const int idx = std::min(7, static_cast<int>(t * 8.0));
    out += kLevels[idx];
  }
  return out;
}

}  // namespace platonav
