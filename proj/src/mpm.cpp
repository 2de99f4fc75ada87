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

#include "interplay/mpm.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

#include "interplay/errors.hpp"
#include "interplay/parallel.hpp"

namespace interplay {

namespace {

std::string describe_position(const Vec3& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.x() << ", " << x.y() << ", " << x.z() << ")";
  return os.str();
}

// Per-particle quantities computed once per P2G and read by every node gather.
struct TransferTerms {
  Stencil stencil;
  Vec3 position;
  Vec3 momentum;
  Mat3 affine;
  double mass;
};

}  // namespace

Particle make_particle(const Vec3& position, double mass, double initial_volume,
                       PartLabel part) {
  Particle p;
  p.position = position;
  p.mass = mass;
  p.initial_volume = initial_volume;
  p.part = part;
  return p;
}

Vec3 GridSpec::extent() const {
  return Vec3(cells[0], cells[1], cells[2]) * spacing;
}

BoundaryConfig BoundaryConfig::all(BoundaryKind kind) {
  BoundaryConfig bc;
  bc.faces.fill(kind);
  return bc;
}

Grid::Grid(const GridSpec& spec, const BoundaryConfig& boundary) : spec_(spec) {
  for (int a = 0; a < 3; ++a) {
    if (spec.cells[a] < 2 * kInteriorMarginCells + 1) {
      throw ConfigError("grid needs at least " + std::to_string(2 * kInteriorMarginCells + 1) +
                        " cells per axis");
    }
    dims_[a] = spec.cells[a] + 1;
  }
  if (!(spec.spacing > 0.0) || !std::isfinite(spec.spacing)) {
    throw ConfigError("grid spacing must be > 0");
  }
  const std::size_t n = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  node_mass.assign(n, 0.0);
  node_momentum.assign(n, Vec3::Zero());
  node_velocity.assign(n, Vec3::Zero());
  boundary_.resize(n);

  for (int i = 0; i < dims_[0]; ++i) {
    for (int j = 0; j < dims_[1]; ++j) {
      for (int k = 0; k < dims_[2]; ++k) {
        const std::array<int, 3> c{i, j, k};
        NodeBoundary nb;
        bool sticky = false;
        for (int a = 0; a < 3; ++a) {
          const bool low = c[a] < kBoundaryBandNodes;
          const bool high = c[a] > dims_[a] - 1 - kBoundaryBandNodes;
          for (int side = 0; side < 2; ++side) {
            if (!(side == 0 ? low : high)) continue;
            const BoundaryKind kind = boundary.faces[2 * a + side];
            if (kind == BoundaryKind::kSticky) sticky = true;
            if (kind == BoundaryKind::kSlip) nb.slip_axes[a] = true;
          }
        }
        if (sticky) {
          nb.condition = NodeCondition::kSticky;
          nb.slip_axes = {false, false, false};
        } else if (nb.slip_axes[0] || nb.slip_axes[1] || nb.slip_axes[2]) {
          nb.condition = NodeCondition::kSlip;
        }
        boundary_[index(i, j, k)] = nb;
      }
    }
  }
}

std::array<int, 3> Grid::node_coords(std::size_t idx) const {
  const int k = static_cast<int>(idx % dims_[2]);
  idx /= dims_[2];
  const int j = static_cast<int>(idx % dims_[1]);
  const int i = static_cast<int>(idx / dims_[1]);
  return {i, j, k};
}

void Grid::clear() {
  std::fill(node_mass.begin(), node_mass.end(), 0.0);
  std::fill(node_momentum.begin(), node_momentum.end(), Vec3::Zero());
  std::fill(node_velocity.begin(), node_velocity.end(), Vec3::Zero());
}

double Grid::total_mass() const {
  double total = 0.0;
  for (double m : node_mass) total += m;
  return total;
}

Vec3 Grid::total_momentum() const {
  Vec3 total = Vec3::Zero();
  for (const Vec3& p : node_momentum) total += p;
  return total;
}

Vec3 Stencil::gradient(int a, int b, int c) const {
  return Vec3(derivatives[0][a] * weights[1][b] * weights[2][c],
              weights[0][a] * derivatives[1][b] * weights[2][c],
              weights[0][a] * weights[1][b] * derivatives[2][c]);
}

Stencil quadratic_stencil(const Vec3& position, double spacing) {
  Stencil s;
  const double inv_h = 1.0 / spacing;
  for (int a = 0; a < 3; ++a) {
    const double xi = position[a] * inv_h;
    const int base = static_cast<int>(std::floor(xi - 0.5));
    const double fx = xi - base;
    s.base[a] = base;
    s.weights[a] = {0.5 * (1.5 - fx) * (1.5 - fx), 0.75 - (fx - 1.0) * (fx - 1.0),
                    0.5 * (fx - 0.5) * (fx - 0.5)};
    s.derivatives[a] = {-(1.5 - fx) * inv_h, -2.0 * (fx - 1.0) * inv_h, (fx - 0.5) * inv_h};
  }
  return s;
}

bool inside_interior_margin(const Vec3& x, const GridSpec& spec) {
  const double lo = kInteriorMarginCells * spec.spacing;
  for (int a = 0; a < 3; ++a) {
    const double hi = (spec.cells[a] - kInteriorMarginCells) * spec.spacing;
    if (!(x[a] >= lo && x[a] <= hi)) return false;
  }
  return true;
}

Mat3 polar_rotation(const Mat3& f) {
  Eigen::JacobiSVD<Mat3> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Mat3 corotated_stress(const Mat3& f, double lambda, double mu) {
  const double j = f.determinant();
  const Mat3 r = polar_rotation(f);
  return 2.0 * mu * (f - r) * f.transpose() + lambda * (j - 1.0) * j * Mat3::Identity();
}

Mat3 kirchhoff_stress(const Mat3& elastic_deformation, const Mat3& /*viscous_deformation*/,
                      const Mat3& velocity_gradient, const MaterialParams& material) {
  const double j = elastic_deformation.determinant();
  if (!(j > 0.0)) {
    throw InversionError("inverted elastic deformation (det F_E = " + std::to_string(j) + ")",
                         std::numeric_limits<std::size_t>::max());
  }
  Mat3 tau = corotated_stress(elastic_deformation, material.lame_lambda(), material.lame_mu());
  if (material.viscosity() > 0.0) {
    tau += material.viscosity() * 0.5 * (velocity_gradient + velocity_gradient.transpose());
  }
  return tau;
}

void particle_to_grid(std::span<const Particle> particles, Grid& grid,
                      const PartMaterialMap& materials, double dt,
                      const ParallelOptions& parallel) {
  const GridSpec& spec = grid.spec();
  const double h = spec.spacing;
  const double mls_scale = 4.0 / (h * h);
  const std::size_t np = particles.size();
  grid.clear();
  if (np == 0) return;

  // Material lookup resolved up front so every part error is reported once.
  std::vector<const MaterialParams*> part_material;
  for (const auto& [label, params] : materials.entries()) {
    if (label >= static_cast<PartLabel>(part_material.size())) part_material.resize(label + 1);
    part_material[label] = &params;
  }

  std::vector<TransferTerms> terms(np);
  for (std::size_t p = 0; p < np; ++p) {
    const Particle& q = particles[p];
    if (!inside_interior_margin(q.position, spec)) {
      throw OutOfDomainError("particle " + std::to_string(p) + " at " +
                                 describe_position(q.position) +
                                 " is outside the grid interior margin",
                             p);
    }
    if (q.part < 0 || q.part >= static_cast<PartLabel>(part_material.size()) ||
        part_material[q.part] == nullptr) {
      throw ConfigError("particle " + std::to_string(p) + " has part " +
                        std::to_string(q.part) + " with no material");
    }
    if (!(q.elastic_deformation.determinant() > 0.0)) {
      throw InversionError("particle " + std::to_string(p) + " has det(F_E) <= 0", p);
    }
  }

  parallel_for(np, parallel.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const Particle& q = particles[p];
      const Mat3 tau = kirchhoff_stress(q.elastic_deformation, q.viscous_deformation, q.affine,
                                        *part_material[q.part]);
      TransferTerms& t = terms[p];
      t.stencil = quadratic_stencil(q.position, h);
      t.position = q.position;
      t.momentum = q.mass * q.velocity;
      t.mass = q.mass;
      t.affine = q.mass * q.affine - (dt * mls_scale * q.initial_volume) * tau;
    }
  });

  // Bucket particles by stencil base cell (counting sort, stable in particle index).
  const auto dims = grid.node_dims();
  auto& sc = grid.scratch;
  const std::size_t cell_count = grid.node_count();
  sc.bucket_start.assign(cell_count + 1, 0);
  sc.particle_bucket.resize(np);
  std::array<int, 3> lo{dims[0], dims[1], dims[2]};
  std::array<int, 3> hi{-1, -1, -1};
  for (std::size_t p = 0; p < np; ++p) {
    const auto& b = terms[p].stencil.base;
    const std::size_t cell = grid.index(b[0], b[1], b[2]);
    sc.particle_bucket[p] = cell;
    ++sc.bucket_start[cell + 1];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], b[a]);
      hi[a] = std::max(hi[a], b[a] + 2);
    }
  }
  for (std::size_t c = 0; c < cell_count; ++c) sc.bucket_start[c + 1] += sc.bucket_start[c];
  sc.bucket_particles.resize(np);
  {
    std::vector<std::size_t> fill(sc.bucket_start.begin(), sc.bucket_start.end() - 1);
    for (std::size_t p = 0; p < np; ++p) sc.bucket_particles[fill[sc.particle_bucket[p]]++] = p;
  }

  // Gather: each node sums over the (up to) 27 buckets whose stencils reach it.
  const int span_i = hi[0] - lo[0] + 1;
  const int span_j = hi[1] - lo[1] + 1;
  const int span_k = hi[2] - lo[2] + 1;
  const std::size_t active = static_cast<std::size_t>(span_i) * span_j * span_k;
  parallel_for(active, parallel.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const int i = lo[0] + static_cast<int>(n / (static_cast<std::size_t>(span_j) * span_k));
      const int j = lo[1] + static_cast<int>((n / span_k) % span_j);
      const int k = lo[2] + static_cast<int>(n % span_k);
      const Vec3 xi = grid.node_position(i, j, k);
      double mass = 0.0;
      Vec3 momentum = Vec3::Zero();
      for (int a = 0; a < 3; ++a) {
        const int bi = i - a;
        if (bi < lo[0] || bi > hi[0] - 2) continue;
        for (int b = 0; b < 3; ++b) {
          const int bj = j - b;
          if (bj < lo[1] || bj > hi[1] - 2) continue;
          for (int c = 0; c < 3; ++c) {
            const int bk = k - c;
            if (bk < lo[2] || bk > hi[2] - 2) continue;
            const std::size_t cell = grid.index(bi, bj, bk);
            for (std::size_t s = sc.bucket_start[cell]; s < sc.bucket_start[cell + 1]; ++s) {
              const TransferTerms& t = terms[sc.bucket_particles[s]];
              const double w = t.stencil.weight(a, b, c);
              mass += w * t.mass;
              momentum += w * (t.momentum + t.affine * (xi - t.position));
            }
          }
        }
      }
      const std::size_t idx = grid.index(i, j, k);
      grid.node_mass[idx] = mass;
      grid.node_momentum[idx] = momentum;
    }
  });
}

void grid_step(Grid& grid, double dt, const Vec3& gravity, std::span<const ForceField> forces,
               double time) {
  const std::size_t n = grid.node_count();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double m = grid.node_mass[idx];
    if (!(m > kMassEpsilon)) {
      grid.node_velocity[idx] = Vec3::Zero();
      continue;
    }
    Vec3 accel = gravity;
    if (!forces.empty()) {
      const auto c = grid.node_coords(idx);
      const Vec3 x = grid.node_position(c[0], c[1], c[2]);
      for (const ForceField& f : forces) accel += sample_force(f, x, time);
    }
    Vec3 v = grid.node_momentum[idx] / m + dt * accel;
    const NodeBoundary& nb = grid.boundary(idx);
    if (nb.condition == NodeCondition::kSticky) {
      v.setZero();
    } else if (nb.condition == NodeCondition::kSlip) {
      for (int a = 0; a < 3; ++a) {
        if (nb.slip_axes[a]) v[a] = 0.0;
      }
    }
    grid.node_velocity[idx] = v;
  }
}

void grid_to_particle(const Grid& grid, std::span<Particle> particles, double dt,
                      const ParallelOptions& parallel) {
  const double h = grid.spacing();
  const double mls_scale = 4.0 / (h * h);
  const auto dims = grid.node_dims();
  parallel_for(particles.size(), parallel.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      Particle& q = particles[p];
      const Stencil s = quadratic_stencil(q.position, h);
      for (int a = 0; a < 3; ++a) {
        if (s.base[a] < 0 || s.base[a] + 2 >= dims[a]) {
          throw OutOfDomainError("particle " + std::to_string(p) + " at " +
                                     describe_position(q.position) + " left the grid",
                                 p);
        }
      }
      Vec3 v = Vec3::Zero();
      Mat3 c = Mat3::Zero();
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          for (int cc = 0; cc < 3; ++cc) {
            const int i = s.base[0] + a;
            const int j = s.base[1] + b;
            const int k = s.base[2] + cc;
            const double w = s.weight(a, b, cc);
            const Vec3& vi = grid.node_velocity[grid.index(i, j, k)];
            v += w * vi;
            c += (w * mls_scale) * vi * (grid.node_position(i, j, k) - q.position).transpose();
          }
        }
      }
      q.velocity = v;
      q.affine = c;
      q.position += dt * v;
      q.elastic_deformation = (Mat3::Identity() + dt * c) * q.elastic_deformation;
      const double det = q.elastic_deformation.determinant();
      if (!(det > 0.0)) {
        throw InversionError("particle " + std::to_string(p) +
                                 " inverted (det F_E = " + std::to_string(det) + ")",
                             p);
      }
    }
  });
}

}  // namespace interplay
