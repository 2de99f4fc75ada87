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

#include "interplay/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "interplay/errors.hpp"

namespace interplay {

double cfl_limit(const Scene& scene) {
  double max_speed = 0.0;
  for (const Particle& p : scene.particles) {
    const double c = scene.materials.at(p.part).wave_speed();
    max_speed = std::max(max_speed, p.velocity.norm() + c);
  }
  if (max_speed <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.4 * scene.grid.spacing / max_speed;
}

void check_cfl(const Scene& scene, double dt) {
  if (!(dt > 0.0)) throw CflError("time step must be > 0");
  const double limit = cfl_limit(scene);
  if (dt > limit) {
    std::ostringstream os;
    os.precision(6);
    os << "time step " << dt << " exceeds CFL limit " << limit;
    throw CflError(os.str());
  }
}

void Solver::step(Scene& scene, double dt) {
  check_cfl(scene, dt);
  if (!grid_ || !(grid_->spec() == scene.grid) || !(grid_boundary_ == scene.boundary)) {
    grid_.emplace(scene.grid, scene.boundary);
    grid_boundary_ = scene.boundary;
  }
  particle_to_grid(scene.particles, *grid_, scene.materials, dt, parallel_);
  grid_step(*grid_, dt, scene.gravity, scene.external_forces, scene.time);
  grid_to_particle(*grid_, scene.particles, dt, parallel_);
  scene.time += dt;
}

Scene mpm_step(Scene scene, double dt, const ParallelOptions& parallel) {
  Solver solver(parallel);
  solver.step(scene, dt);
  return scene;
}

SimulationResult simulate(const Scene& initial, int steps, double dt, int frame_stride,
                          const ParallelOptions& parallel) {
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (frame_stride < 1) throw ConfigError("frame_stride must be >= 1");
  SimulationResult result;
  result.trajectory.dt = dt;
  result.trajectory.frame_stride = frame_stride;
  result.trajectory.frames.push_back(initial.particles);
  result.trajectory.times.push_back(initial.time);

  Scene scene = initial;
  Solver solver(parallel);
  for (int s = 1; s <= steps; ++s) {
    try {
      solver.step(scene, dt);
    } catch (const Error& e) {
      result.failure = "step " + std::to_string(s) + ": " + e.what();
      return result;
    }
    result.steps_completed = s;
    if (s % frame_stride == 0) {
      result.trajectory.frames.push_back(scene.particles);
      result.trajectory.times.push_back(scene.time);
    }
  }
  return result;
}

double total_mass(std::span<const Particle> particles) {
  double m = 0.0;
  for (const Particle& p : particles) m += p.mass;
  return m;
}

Vec3 total_momentum(std::span<const Particle> particles) {
  Vec3 sum = Vec3::Zero();
  for (const Particle& p : particles) sum += p.mass * p.velocity;
  return sum;
}

Vec3 center_of_mass(std::span<const Particle> particles) {
  Vec3 sum = Vec3::Zero();
  double m = 0.0;
  for (const Particle& p : particles) {
    sum += p.mass * p.position;
    m += p.mass;
  }
  return m > 0.0 ? Vec3(sum / m) : Vec3(Vec3::Zero());
}

double deformed_volume(std::span<const Particle> particles) {
  double v = 0.0;
  for (const Particle& p : particles) v += p.initial_volume * p.elastic_deformation.determinant();
  return v;
}

}  // namespace interplay
