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

#include <Eigen/Core>
#include <optional>

namespace interplay {

struct Box {
  Eigen::Vector3d lower = Eigen::Vector3d::Zero();
  Eigen::Vector3d upper = Eigen::Vector3d::Zero();

  bool contains(const Eigen::Vector3d& x) const {
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }
  bool operator==(const Box&) const = default;
};

enum class ForceKind { kUniformWind, kRegionImpulse };

// External acceleration field (force per unit mass) added to gravity on the grid.
struct ForceField {
  ForceKind kind = ForceKind::kUniformWind;
  Eigen::Vector3d vector = Eigen::Vector3d::Zero();
  std::optional<Box> region;  // empty: whole domain
  double t_start = 0.0;
  double t_end = 0.0;

  bool operator==(const ForceField&) const = default;
};

// The field vector if x lies in the region and t in [t_start, t_end], else zero.
Eigen::Vector3d sample_force(const ForceField& field, const Eigen::Vector3d& x, double t);

}  // namespace interplay
