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

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "interplay/forces.hpp"
#include "interplay/materials.hpp"

namespace interplay {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Lagrangian material point.
struct Particle {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double mass = 1.0;
  double initial_volume = 1.0;
  Mat3 elastic_deformation = Mat3::Identity();  // F_E
  Mat3 viscous_deformation = Mat3::Identity();  // F_N
  Mat3 affine = Mat3::Zero();                   // C
  PartLabel part = 0;
};

using ParticleSet = std::vector<Particle>;

// Rest-state particle: F_E = F_N = I, C = 0, v = 0.
Particle make_particle(const Vec3& position, double mass, double initial_volume,
                       PartLabel part);

// Node-activity threshold in simulation mass units.
inline constexpr double kMassEpsilon = 1e-12;

// Particles must stay this many cells away from every domain face.
inline constexpr int kInteriorMarginCells = 2;

// Node layers adjacent to a face that receive that face's boundary condition.
inline constexpr int kBoundaryBandNodes = 4;

// Uniform grid over [0, cells * spacing] per axis; nodes are indexed 0..cells.
struct GridSpec {
  std::array<int, 3> cells{32, 32, 32};
  double spacing = 1.0 / 32.0;

  Vec3 extent() const;
  bool operator==(const GridSpec&) const = default;
};

enum class BoundaryKind { kFree, kSticky, kSlip };

// Face order: x-, x+, y-, y+, z-, z+. y- is the floor.
struct BoundaryConfig {
  std::array<BoundaryKind, 6> faces{BoundaryKind::kSlip,   BoundaryKind::kSlip,
                                    BoundaryKind::kSticky, BoundaryKind::kSlip,
                                    BoundaryKind::kSlip,   BoundaryKind::kSlip};

  static BoundaryConfig all(BoundaryKind kind);
  bool operator==(const BoundaryConfig&) const = default;
};

enum class NodeCondition : unsigned char { kInterior, kSticky, kSlip };

struct NodeBoundary {
  NodeCondition condition = NodeCondition::kInterior;
  // Axes whose normal component is removed (slip only).
  std::array<bool, 3> slip_axes{false, false, false};
};

// Eulerian background grid plus the scratch index P2G uses for its gather.
class Grid {
 public:
  Grid(const GridSpec& spec, const BoundaryConfig& boundary);

  const GridSpec& spec() const { return spec_; }
  double spacing() const { return spec_.spacing; }
  std::array<int, 3> node_dims() const { return dims_; }
  std::size_t node_count() const { return node_mass.size(); }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }
  Vec3 node_position(int i, int j, int k) const {
    return Vec3(i, j, k) * spec_.spacing;
  }
  std::array<int, 3> node_coords(std::size_t index) const;
  const NodeBoundary& boundary(std::size_t index) const { return boundary_[index]; }

  // Zeroes mass, momentum and velocity.
  void clear();

  double total_mass() const;
  Vec3 total_momentum() const;

  std::vector<double> node_mass;
  std::vector<Vec3> node_momentum;
  std::vector<Vec3> node_velocity;

  // Per-particle P2G scratch, kept to avoid reallocating every step.
  struct Scratch {
    std::vector<std::size_t> bucket_start;
    std::vector<std::size_t> bucket_particles;
    std::vector<std::size_t> particle_bucket;
  } scratch;

 private:
  GridSpec spec_;
  std::array<int, 3> dims_{};
  std::vector<NodeBoundary> boundary_;
};

// Quadratic B-spline interpolation stencil of one particle: 3 nodes per axis
// starting at `base`.
struct Stencil {
  std::array<int, 3> base{};
  std::array<std::array<double, 3>, 3> weights{};      // [axis][offset]
  std::array<std::array<double, 3>, 3> derivatives{};  // d weight / dx, [axis][offset]

  double weight(int a, int b, int c) const {
    return weights[0][a] * weights[1][b] * weights[2][c];
  }
  Vec3 gradient(int a, int b, int c) const;
};

Stencil quadratic_stencil(const Vec3& position, double spacing);

// True when the particle is at least kInteriorMarginCells from every face.
bool inside_interior_margin(const Vec3& position, const GridSpec& spec);

// Fixed-corotated elastic Kirchhoff stress
//   tau_E = 2 mu (F - R) F^T + lambda (J - 1) J I
// with R the rotation of the polar decomposition of F and J = det F.
Mat3 corotated_stress(const Mat3& elastic_deformation, double lambda, double mu);

// Total Kirchhoff stress: corotated elastic part plus the Newtonian viscous
// term viscosity * sym(grad_v). The viscous-branch gradient is accepted for
// completeness and does not contribute under the Newtonian model.
// Throws InversionError if det(F_E) <= 0.
Mat3 kirchhoff_stress(const Mat3& elastic_deformation, const Mat3& viscous_deformation,
                      const Mat3& velocity_gradient, const MaterialParams& material);

// Polar rotation of F (det F > 0).
Mat3 polar_rotation(const Mat3& deformation);

struct ParallelOptions {
  int threads = 1;  // <= 0 uses std::thread::hardware_concurrency()
};

// Fused MLS-MPM P2G. Node mass m_i = sum_p w_ip m_p and momentum
//   sum_p w_ip (m_p v_p + (m_p C_p - dt (4/h^2) V0_p tau_p)(x_i - x_p)).
// Nodes gather from a cell-bucket index, so the result does not depend on the
// thread count.
void particle_to_grid(std::span<const Particle> particles, Grid& grid,
                      const PartMaterialMap& materials, double dt,
                      const ParallelOptions& parallel = {});

// Normalizes momentum to velocity, adds dt * (gravity + force fields) and
// applies boundary conditions. Nodes below kMassEpsilon get zero velocity.
void grid_step(Grid& grid, double dt, const Vec3& gravity,
               std::span<const ForceField> forces = {}, double time = 0.0);

// APIC/MLS G2P: velocity, affine matrix, advection and F_E update. Throws
// InversionError naming the first particle whose det(F_E) becomes <= 0.
void grid_to_particle(const Grid& grid, std::span<Particle> particles, double dt,
                      const ParallelOptions& parallel = {});

}  // namespace interplay
