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

#ifndef PLATONAV_EXPERIMENT_HPP_
#define PLATONAV_EXPERIMENT_HPP_

#include <string>
#include <vector>

#include "platonav/config.hpp"
#include "platonav/learners.hpp"
#include "platonav/policy.hpp"

namespace platonav {

struct EvaluationResult {
  double mttf = 0.0;  // seconds, arithmetic mean of survival times
  std::vector<double> survival_times;
  double crash_rate = 0.0;  // fraction of episodes ending in a crash
};

// Rolls out the policy alone (mean action, no teacher) from fresh respawns
// on freshly seeded fields. Survival ends at the first crash or after
// max_steps. Crashes are data, not errors.
EvaluationResult evaluate_policy(const GaussianMlpPolicy& policy,
                                 const ExperimentConfig& config, int episodes,
                                 int max_steps, Rng& rng);

// One CSV row per training iteration. Wall-clock stays out of the CSV so a
// rerun with the same config and seed is byte-identical; it goes to the run
// log instead.
struct MetricsRecord {
  int iteration = 0;
  int training_crashes = 0;
  int planner_faults = 0;
  double mean_step_kl = 0.0;
  double kl_exceed_fraction = 0.0;
  double mean_step_cost = 0.0;  // normalized cost in [0, 1]
  double eval_mttf = 0.0;
  double eval_crash_rate = 0.0;
  std::string snapshot_file;
  double wall_clock_seconds = 0.0;  // log only, never serialized
};

// Fixed schema: header line
//   iteration,training_crashes,planner_faults,mean_step_kl,
//   kl_exceed_fraction,mean_step_cost,eval_mttf_s,eval_crash_rate,snapshot
// Decimal point, no locale formatting.
std::string metrics_to_csv(const std::vector<MetricsRecord>& records);

struct ExperimentResult {
  std::vector<MetricsRecord> records;
  std::string metrics_path;
  TrainingRun run;
};

// Runs the configured method, evaluates every per-iteration snapshot, writes
// metrics.csv and policy_iter_NNN.txt snapshots under out_dir. `quiet`
// suppresses the per-iteration progress log.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir, bool quiet = false);

struct LambdaSummary {
  double lambda = 0.0;
  double teacher_cost = 0.0;  // mean executed stage cost per step
  int training_crashes = 0;
  double final_mttf = 0.0;
  double mean_kl = 0.0;  // mean realized per-step KL over the whole run
};

// run_experiment once per lambda (shared master seed), in parallel workers.
// Writes per-lambda runs under out_dir/lambda_<i> and a sweep.csv summary.
std::vector<LambdaSummary> lambda_sweep(const ExperimentConfig& base_config,
                                        const std::vector<double>& lambdas,
                                        const std::string& out_dir);

// Plain-text sparkline of a metric column per iteration (for the CLI
// `summary` helper).
std::string sparkline(const std::vector<double>& values);

}  // namespace platonav

#endif  // PLATONAV_EXPERIMENT_HPP_
