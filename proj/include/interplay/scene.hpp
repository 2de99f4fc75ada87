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

#include <Eigen/Geometry>
#include <filesystem>
#include <set>
#include <span>
#include <vector>

#include "interplay/forces.hpp"
#include "interplay/materials.hpp"
#include "interplay/mpm.hpp"

namespace interplay {

// Fraction of a cloud's bounding volume assigned to its particles.
inline constexpr double kFillFactor = 0.85;

struct Scene {
  ParticleSet particles;
  PartMaterialMap materials;
  GridSpec grid;
  BoundaryConfig boundary;
  Vec3 gravity = Vec3(0.0, -9.8, 0.0);
  std::vector<ForceField> external_forces;
  double dt = 1e-3;
  double time = 0.0;
};

// Throws ConfigError unless every particle label has a material and every
// particle lies inside the interior margin.
void validate_scene(const Scene& scene);

struct Placement {
  Vec3 translation = Vec3::Zero();
  double uniform_scale = 1.0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  double drop_height = 0.0;

  // x' = R (s x) + t + drop_height * y_hat, applied about the cloud's local origin.
  Vec3 apply(const Vec3& x) const;
};

// Builds rest-state particles from positions. Every particle gets
// V0 = bounding_volume * kFillFactor / count and mass = density * V0.
ParticleSet make_cloud(std::span<const Vec3> positions, PartLabel part, double density = 1.0);

// Reads a PLY or CSV particle file. Velocity columns, if any, are ignored:
// loaded clouds start at rest.
ParticleSet load_particle_cloud(const std::filesystem::path& path, PartLabel part,
                                double density = 1.0);

// Reads positions only (CSV header x,y,z[,vx,vy,vz] or PLY).
std::vector<Vec3> read_cloud_positions(const std::filesystem::path& path);

// Writes positions (and velocities) as CSV with round-trip precision.
void write_particle_csv(const std::filesystem::path& path, std::span<const Particle> particles);

// Appends `foreground` (after placement) to a copy of `background` and binds
// its parts to `foreground_materials`. Masses are recomputed as density * V0.
Scene compose_scene(const Scene& background, const ParticleSet& foreground,
                    const Placement& placement, const PartMaterialMap& foreground_materials);

// Single-material convenience: every foreground particle's part gets `material`.
Scene compose_scene(const Scene& background, const ParticleSet& foreground,
                    const Placement& placement, const MaterialParams& material);

struct SegmentationResult {
  ParticleSet particles;
  std::set<PartLabel> labels;
};

// Overwrites part labels from a newline-delimited integer file, one row per particle.
SegmentationResult apply_segmentation_labels(const ParticleSet& particles,
                                             const std::filesystem::path& labels);

// Lattice samplers for simple test and demo bodies.
std::vector<Vec3> sample_box(const Vec3& lower, const Vec3& upper, double spacing);
std::vector<Vec3> sample_sphere(const Vec3& center, double radius, double spacing);

struct Bounds {
  Vec3 lower;
  Vec3 upper;
  Vec3 size() const { return upper - lower; }
};
Bounds bounding_box(std::span<const Vec3> positions);
Bounds bounding_box(std::span<const Particle> particles);

}  // namespace interplay
