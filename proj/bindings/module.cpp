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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "platonav/config.hpp"
#include "platonav/costs.hpp"
#include "platonav/errors.hpp"
#include "platonav/experiment.hpp"
#include "platonav/gaussian.hpp"
#include "platonav/learners.hpp"
#include "platonav/observation.hpp"
#include "platonav/policy.hpp"
#include "platonav/trajopt.hpp"
#include "platonav/vehicle.hpp"
#include "platonav/world.hpp"

namespace py = pybind11;
using namespace platonav;

namespace {

VehicleState state_from_vector(const Eigen::VectorXd& x) {
  if (x.size() != VehicleState::kDim) {
    throw ContractViolation("state vector must have 6 entries");
  }
  return VehicleState::from_vector(x);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planar MPC-teacher / imitation-learner navigation bench";

  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("stream", &Rng::stream, py::arg("master_seed"),
                  py::arg("stream_id"))
      .def("uniform", py::overload_cast<>(&Rng::uniform))
      .def("normal", py::overload_cast<>(&Rng::normal));

  py::class_<Gaussian>(m, "Gaussian")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("mean"),
           py::arg("covariance"))
      .def_property_readonly("mean", &Gaussian::mean)
      .def_property_readonly("covariance", &Gaussian::covariance)
      .def_property_readonly("dim", &Gaussian::dim);
  m.def("kl_divergence", &kl_divergence, py::arg("p"), py::arg("q"));
  m.def("sample", &sample, py::arg("gaussian"), py::arg("rng"));

  py::class_<ObstacleField>(m, "ObstacleField")
      .def_property_readonly("num_circles",
                             [](const ObstacleField& f) { return f.circles.size(); })
      .def_property_readonly("num_segments",
                             [](const ObstacleField& f) { return f.segments.size(); })
      .def("export_geometry",
           [](const ObstacleField& f) { return export_geometry(f); });
  py::class_<CanyonParams>(m, "CanyonParams")
      .def(py::init<>())
      .def_readwrite("length", &CanyonParams::length)
      .def_readwrite("width", &CanyonParams::width)
      .def_readwrite("max_turn", &CanyonParams::max_turn)
      .def_readwrite("segment_length", &CanyonParams::segment_length)
      .def_readwrite("heading_limit", &CanyonParams::heading_limit);
  py::class_<ForestParams>(m, "ForestParams")
      .def(py::init<>())
      .def_readwrite("extent", &ForestParams::extent)
      .def_readwrite("tree_radius", &ForestParams::tree_radius)
      .def_readwrite("avg_spacing", &ForestParams::avg_spacing)
      .def_readwrite("min_gap", &ForestParams::min_gap)
      .def_readwrite("spawn_clear_radius", &ForestParams::spawn_clear_radius);
  m.def("generate_canyon", &generate_canyon, py::arg("seed"), py::arg("params"));
  m.def("generate_forest", &generate_forest, py::arg("seed"), py::arg("params"));
  m.def(
      "signed_distance",
      [](const ObstacleField& f, double x, double y) {
        return signed_distance(f, Vec2(x, y));
      },
      py::arg("field"), py::arg("x"), py::arg("y"));
  m.def(
      "raycast_laser",
      [](const ObstacleField& f, double x, double y, double heading, int beams,
         double fan, double max_range) {
        return raycast_laser(f, Vec2(x, y), heading, beams, fan, max_range);
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("heading"),
      py::arg("beam_count"), py::arg("fan_angle"), py::arg("max_range"));
  m.def(
      "crash_check",
      [](const ObstacleField& f, double x, double y, double radius) {
        return crash_check(f, Vec2(x, y), radius);
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("vehicle_radius"));

  m.def(
      "step_vehicle",
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& u, double dt,
         double noise_scale, Rng& rng) {
        const VehicleState next = step(state_from_vector(x), ControlInput{u},
                                       dt, noise_scale, rng);
        return next.to_vector();
      },
      py::arg("state"), py::arg("control"), py::arg("dt"),
      py::arg("noise_scale"), py::arg("rng"));
  m.def(
      "linearize_dynamics",
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& u, double dt) {
        Eigen::MatrixXd a, b;
        Eigen::VectorXd c;
        linearize_dynamics(x, u, dt, a, b, c);
        return py::make_tuple(a, b, c);
      },
      py::arg("state"), py::arg("control"), py::arg("dt"));

  py::class_<GaussianMlpPolicy>(m, "GaussianMlpPolicy")
      .def_static(
          "initialize",
          [](int input_dim, int hidden_units, double init_covariance,
             Rng& rng) {
            return GaussianMlpPolicy::initialize(input_dim, hidden_units,
                                                 init_covariance, rng);
          },
          py::arg("input_dim"), py::arg("hidden_units"),
          py::arg("init_covariance"), py::arg("rng"))
      .def("mean", &GaussianMlpPolicy::mean, py::arg("observation"))
      .def_property_readonly("input_dim", &GaussianMlpPolicy::input_dim)
      .def_readwrite("action_covariance", &GaussianMlpPolicy::action_covariance);
  m.def("policy_forward", &policy_forward, py::arg("policy"),
        py::arg("observation"));
  m.def("save_policy", &save_policy, py::arg("policy"), py::arg("path"));
  m.def("load_policy", &load_policy, py::arg("path"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("method", &ExperimentConfig::method)
      .def_readwrite("iterations", &ExperimentConfig::iterations)
      .def_readwrite("steps_per_iteration", &ExperimentConfig::steps_per_iteration)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("eval_episodes", &ExperimentConfig::eval_episodes)
      .def_readwrite("eval_max_steps", &ExperimentConfig::eval_max_steps);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("serialize_config", &serialize_config, py::arg("config"));

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_readonly("iteration", &MetricsRecord::iteration)
      .def_readonly("training_crashes", &MetricsRecord::training_crashes)
      .def_readonly("planner_faults", &MetricsRecord::planner_faults)
      .def_readonly("mean_step_kl", &MetricsRecord::mean_step_kl)
      .def_readonly("kl_exceed_fraction", &MetricsRecord::kl_exceed_fraction)
      .def_readonly("mean_step_cost", &MetricsRecord::mean_step_cost)
      .def_readonly("eval_mttf", &MetricsRecord::eval_mttf)
      .def_readonly("eval_crash_rate", &MetricsRecord::eval_crash_rate)
      .def_readonly("snapshot_file", &MetricsRecord::snapshot_file);

  m.def(
      "run_experiment",
      [](const ExperimentConfig& config, const std::string& out_dir,
         bool quiet) {
        const ExperimentResult result = run_experiment(config, out_dir, quiet);
        return py::make_tuple(result.records, result.metrics_path);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("quiet") = true);
  m.def(
      "evaluate_policy",
      [](const GaussianMlpPolicy& policy, const ExperimentConfig& config,
         int episodes, int max_steps, Rng& rng) {
        const EvaluationResult r =
            evaluate_policy(policy, config, episodes, max_steps, rng);
        return py::make_tuple(r.mttf, r.survival_times, r.crash_rate);
      },
      py::arg("policy"), py::arg("config"), py::arg("episodes"),
      py::arg("max_steps"), py::arg("rng"));

  py::class_<LambdaSummary>(m, "LambdaSummary")
      .def_readonly("lambda_weight", &LambdaSummary::lambda)
      .def_readonly("teacher_cost", &LambdaSummary::teacher_cost)
      .def_readonly("training_crashes", &LambdaSummary::training_crashes)
      .def_readonly("final_mttf", &LambdaSummary::final_mttf)
      .def_readonly("mean_kl", &LambdaSummary::mean_kl);
  m.def("lambda_sweep", &lambda_sweep, py::arg("config"), py::arg("lambdas"),
        py::arg("out_dir"));
}
