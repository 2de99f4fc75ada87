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

#include <optional>
#include <string>
#include <vector>

#include "interplay/mpm.hpp"
#include "interplay/scene.hpp"

namespace interplay {

// Snapshots taken every `frame_stride` steps; frame k is at times[k].
struct Trajectory {
  std::vector<ParticleSet> frames;
  std::vector<double> times;
  double dt = 0.0;
  int frame_stride = 1;

  std::size_t particle_count() const { return frames.empty() ? 0 : frames.front().size(); }
};

// Largest dt allowed by the CFL bound 0.4 h / max_p(|v_p| + c_p),
// c_p = sqrt((lambda + 2 mu) / rho).
double cfl_limit(const Scene& scene);

// Throws CflError when dt exceeds cfl_limit(scene).
void check_cfl(const Scene& scene, double dt);

// Owns the grid workspace so repeated steps do not reallocate it.
class Solver {
 public:
  explicit Solver(ParallelOptions parallel = {}) : parallel_(parallel) {}

  // grid cleared -> P2G -> grid update -> G2P; advances scene.time by dt.
  // On error the scene may be partially updated.
  void step(Scene& scene, double dt);

  const Grid* grid() const { return grid_ ? &*grid_ : nullptr; }

 private:
  ParallelOptions parallel_;
  std::optional<Grid> grid_;
  BoundaryConfig grid_boundary_;
};

Scene mpm_step(Scene scene, double dt, const ParallelOptions& parallel = {});

struct SimulationResult {
  Trajectory trajectory;
  int steps_completed = 0;
  std::optional<std::string> failure;  // diagnostic of the step that failed

  bool ok() const { return !failure.has_value(); }
};

// Runs `steps` steps, snapshotting the initial state and every
// `frame_stride`-th step. A failing step ends the run; the trajectory up to
// the last good snapshot is returned with the diagnostic.
SimulationResult simulate(const Scene& scene, int steps, double dt, int frame_stride,
                          const ParallelOptions& parallel = {});

// Summary quantities over a particle set.
double total_mass(std::span<const Particle> particles);
Vec3 total_momentum(std::span<const Particle> particles);
Vec3 center_of_mass(std::span<const Particle> particles);
// Sum of V0 * det(F_E).
double deformed_volume(std::span<const Particle> particles);

}  // namespace interplay
