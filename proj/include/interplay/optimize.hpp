// Copyright 2026 The Interplay Authors
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

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "interplay/errors.hpp"
#include "interplay/simulation.hpp"

namespace interplay {

// Free variables for one part. lambda and mu are never free: they are
// re-derived from (E, nu) whenever a scene is built from these values.
struct PartParameters {
  PartLabel part = 0;
  double log_young_modulus = 0.0;
  double poisson_ratio = 0.0;
  double log_viscosity = 0.0;  // ignored when the part is inviscid and viscosity is frozen
};

// Which coordinates of each part are optimized.
struct FreeCoordinates {
  bool young_modulus = true;
  bool poisson_ratio = true;
  bool viscosity = true;
};

struct OptimizableParams {
  std::vector<PartParameters> parts;
  FreeCoordinates free;

  // Initial values read from the scene's current materials.
  static OptimizableParams from_scene(const Scene& scene, std::span<const PartLabel> parts,
                                      FreeCoordinates free = {});

  std::size_t dimension() const;
  std::vector<double> to_vector() const;
  void assign(std::span<const double> values);

  // Throws ParameterDomainError unless every part maps to valid material bounds.
  void validate() const;
};

// Returns a copy of `scene` whose target parts carry the materials encoded by
// `params`; lambda and mu come from the Lame closed form.
Scene apply_params(const Scene& scene, const OptimizableParams& params);

struct GuidanceObjective {
  std::function<double(const Trajectory&)> evaluate;
  std::string descriptor;
};

// Mean squared position error over all frames and particles. Throws ShapeError
// on frame or particle count mismatch.
double trajectory_loss(const Trajectory& simulated, const Trajectory& reference);

// Default objective: trajectory_loss against `reference`.
GuidanceObjective reference_trajectory_objective(Trajectory reference);

// Central differences (f(x + eps_k e_k) - f(x - eps_k e_k)) / (2 eps_k).
// Evaluations may run concurrently on up to `threads` threads; the result does
// not depend on evaluation order. Throws Error naming the coordinate when an
// evaluation is not finite.
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& objective,
                                std::span<const double> x, std::span<const double> eps,
                                int threads = 1);

struct OptimizeConfig {
  int iterations = 10;
  double step_size = 0.1;          // log-space / nu units per unit gradient
  double log_eps = 1e-2;           // finite-difference step for log E and log v
  double poisson_eps = 1e-3;       // finite-difference step for nu
  int sim_steps = 100;
  double dt = 1e-3;
  int frame_stride = 10;
  int threads = 1;
  // Descend on loss / initial_loss so the step size is independent of the
  // objective's units. The recorded history stays unnormalized.
  bool normalize_loss = true;
  // Called with every scene handed to the simulator.
  std::function<void(int iteration, const Scene&)> on_evaluate;
};

struct OptimizeResult {
  OptimizableParams params;
  std::vector<double> loss_history;  // loss at iterate 0..iterations
};

class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& message, int iteration)
      : Error(message), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

// Fixed-step gradient descent over (log E, nu, log v); nu is projected back
// into its open interval after each step.
OptimizeResult optimize_materials(const Scene& scene, const GuidanceObjective& objective,
                                  const OptimizableParams& init, const OptimizeConfig& config);

// Writes `result.txt` (key = value lines: final parameters with derived
// lambda/mu) and `loss_history.csv` (iteration,loss) into `dir`.
std::vector<std::filesystem::path> write_optimize_result(const std::filesystem::path& dir,
                                                         const OptimizeResult& result,
                                                         const Scene& scene,
                                                         const std::string& descriptor);

}  // namespace interplay
