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

#ifndef PLATONAV_ERRORS_HPP_
#define PLATONAV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace platonav {

// Caller broke a documented precondition (dimension mismatch, bad range).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// A numerical routine failed (factorization, singular matrix, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Dynamics produced a non-finite state.
class SimulationDiverged : public NumericalError {
 public:
  explicit SimulationDiverged(const std::string& what)
      : NumericalError(what) {}
};

// Trajectory optimization could not make progress.
class OptimizationFailed : public NumericalError {
 public:
  explicit OptimizationFailed(const std::string& what)
      : NumericalError(what) {}
};

// Policy training produced a non-finite loss.
class TrainingDiverged : public NumericalError {
 public:
  explicit TrainingDiverged(const std::string& what)
      : NumericalError(what) {}
};

// Procedural generation could not satisfy its constraints.
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Experiment configuration is malformed.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace platonav

#endif  // PLATONAV_ERRORS_HPP_
