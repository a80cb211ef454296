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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "platonav/config.hpp"
#include "platonav/errors.hpp"
#include "platonav/experiment.hpp"
#include "platonav/learners.hpp"
#include "platonav/policy.hpp"
#include "platonav/world.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_lambda_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KL-penalized MPC teacher / imitation-learner navigation bench"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", policy_path, lambda_csv;
  std::string metrics_path;
  long seed_override = -1;
  int episodes = 0;

  CLI::App* cmd_run = app.add_subcommand("run", "run a training experiment");
  cmd_run->add_option("--config", config_path, "experiment config file")->required();
  cmd_run->add_option("--seed", seed_override, "override the master seed");
  cmd_run->add_option("--out", out_dir, "output directory");

  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a policy snapshot");
  cmd_eval->add_option("--policy", policy_path, "policy snapshot file")->required();
  cmd_eval->add_option("--config", config_path, "experiment config file")->required();
  cmd_eval->add_option("--episodes", episodes, "number of evaluation episodes");
  cmd_eval->add_option("--seed", seed_override, "override the master seed");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep the KL weight");
  cmd_sweep->add_option("--config", config_path, "experiment config file")->required();
  cmd_sweep->add_option("--lambda", lambda_csv, "comma-separated lambda list")->required();
  cmd_sweep->add_option("--out", out_dir, "output directory");

  CLI::App* cmd_export = app.add_subcommand("export-world", "print the obstacle geometry");
  cmd_export->add_option("--config", config_path, "experiment config file")->required();
  cmd_export->add_option("--iteration", episodes, "training iteration (default 1)");

  CLI::App* cmd_summary = app.add_subcommand("summary", "sparkline summary of a metrics file");
  cmd_summary->add_option("--metrics", metrics_path, "metrics.csv from a run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      platonav::ExperimentConfig config = platonav::load_config(config_path);
      if (seed_override >= 0) {
        config.master_seed = static_cast<std::uint64_t>(seed_override);
      }
      const platonav::ExperimentResult result =
          platonav::run_experiment(config, out_dir);
      std::cout << "metrics written to " << result.metrics_path << "\n";
      return kExitOk;
    }

    if (cmd_eval->parsed()) {
      platonav::ExperimentConfig config = platonav::load_config(config_path);
      if (seed_override >= 0) {
        config.master_seed = static_cast<std::uint64_t>(seed_override);
      }
      const platonav::GaussianMlpPolicy policy = platonav::load_policy(policy_path);
      platonav::Rng rng = platonav::Rng::stream(config.master_seed, 100);
      const int n = episodes > 0 ? episodes : config.eval_episodes;
      const platonav::EvaluationResult eval = platonav::evaluate_policy(
          policy, config, n, config.eval_max_steps, rng);
      std::cout << "episodes: " << n << "\nsurvival_s:";
      for (const double s : eval.survival_times) std::cout << ' ' << s;
      std::cout << "\nmttf_s: " << eval.mttf
                << "\ncrash_rate: " << eval.crash_rate << "\n";
      return kExitOk;
    }

    if (cmd_sweep->parsed()) {
      const platonav::ExperimentConfig config = platonav::load_config(config_path);
      const std::vector<double> lambdas = parse_lambda_list(lambda_csv);
      const auto summaries = platonav::lambda_sweep(config, lambdas, out_dir);
      std::cout << "lambda teacher_cost crashes final_mttf_s mean_kl\n";
      for (const auto& s : summaries) {
        std::cout << s.lambda << ' ' << s.teacher_cost << ' '
                  << s.training_crashes << ' ' << s.final_mttf << ' '
                  << s.mean_kl << "\n";
      }
      return kExitOk;
    }

    if (cmd_export->parsed()) {
      const platonav::ExperimentConfig config = platonav::load_config(config_path);
      const int iteration = episodes > 0 ? episodes : 1;
      const platonav::ObstacleField field =
          platonav::field_for_iteration(config, iteration);
      std::cout << platonav::export_geometry(field);
      return kExitOk;
    }

    if (cmd_summary->parsed()) {
      std::ifstream in(metrics_path);
      if (!in) throw platonav::ConfigError("cannot open " + metrics_path);
      std::string header;
      std::getline(in, header);
      std::vector<double> mttf, crashes;
      std::string line;
      while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() >= 8) {
          crashes.push_back(std::stod(cells[1]));
          mttf.push_back(std::stod(cells[6]));
        }
      }
      std::cout << "eval MTTF      " << platonav::sparkline(mttf) << "\n";
      std::cout << "train crashes  " << platonav::sparkline(crashes) << "\n";
      return kExitOk;
    }
  } catch (const platonav::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const platonav::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const platonav::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
