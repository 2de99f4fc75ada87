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
#include <span>
#include <vector>

#include "interplay/simulation.hpp"

namespace interplay {

// Frame files are binary little-endian PLY with one `vertex` element whose
// properties are, in order:
//   double x, y, z, vx, vy, vz;  int part
// The header carries `comment frame <index> time <t> dt <dt> stride <s>`.
void write_frame_ply(const std::filesystem::path& path, std::span<const Particle> particles,
                     std::size_t frame_index, double time, double dt, int frame_stride);

struct PlyFrame {
  ParticleSet particles;  // position, velocity and part populated
  std::size_t frame_index = 0;
  double time = 0.0;
  double dt = 0.0;
  int frame_stride = 1;
};

// Reads binary little-endian or ASCII PLY. Missing velocity/part properties
// default to zero.
PlyFrame read_frame_ply(const std::filesystem::path& path);

// Summary CSV columns:
//   frame,time,total_mass,momentum_x,momentum_y,momentum_z,com_x,com_y,com_z
void write_summary_csv(const std::filesystem::path& path, const Trajectory& trajectory);

// Writes frame_00000.ply ... plus summary.csv into `dir`; returns the files written.
std::vector<std::filesystem::path> export_trajectory(const std::filesystem::path& dir,
                                                     const Trajectory& trajectory);

// Loads frame_*.ply from `dir` in index order.
Trajectory load_trajectory(const std::filesystem::path& dir);

}  // namespace interplay
