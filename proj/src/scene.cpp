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

#include "interplay/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "interplay/errors.hpp"
#include "interplay/trajectory_io.hpp"

namespace interplay {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string vec_to_string(const Vec3& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

bool has_extension(const std::filesystem::path& path, const char* ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

std::vector<Vec3> read_csv_positions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open particle file " + path.string());
  const std::string source = path.string();
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::vector<Vec3> positions;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (columns == 0) {
      std::string header;
      for (char c : row) {
        if (c != ' ' && c != '\t') header.push_back(c);
      }
      if (header == "x,y,z") {
        columns = 3;
      } else if (header == "x,y,z,vx,vy,vz") {
        columns = 6;
      } else {
        throw ParseError(source, line_no, 1, "expected header 'x,y,z[,vx,vy,vz]'");
      }
      continue;
    }
    if (row.empty()) continue;
    std::array<double, 6> values{};
    std::size_t field = 0;
    std::size_t start = 0;
    const std::size_t offset = static_cast<std::size_t>(row.data() - line.data());
    while (true) {
      const std::size_t comma = row.find(',', start);
      const std::string_view token =
          row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (field >= columns) {
        throw ParseError(source, line_no, offset + start + 1,
                         "too many fields (expected " + std::to_string(columns) + ")");
      }
      if (!parse_double(token, values[field])) {
        throw ParseError(source, line_no, offset + start + 1,
                         "field " + std::to_string(field + 1) + " is not a finite number: '" +
                             std::string(trim(token)) + "'");
      }
      ++field;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != columns) {
      throw ParseError(source, line_no, 0,
                       "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(field));
    }
    positions.emplace_back(values[0], values[1], values[2]);
  }
  if (columns == 0) throw ParseError(source, 1, 1, "missing CSV header");
  return positions;
}

}  // namespace

Eigen::Vector3d sample_force(const ForceField& field, const Eigen::Vector3d& x, double t) {
  if (t < field.t_start || t > field.t_end) return Eigen::Vector3d::Zero();
  if (field.region && !field.region->contains(x)) return Eigen::Vector3d::Zero();
  return field.vector;
}

void validate_scene(const Scene& scene) {
  for (std::size_t i = 0; i < scene.particles.size(); ++i) {
    const Particle& p = scene.particles[i];
    if (!scene.materials.contains(p.part)) {
      throw ConfigError("particle " + std::to_string(i) + " has part " + std::to_string(p.part) +
                        " with no material");
    }
    if (!inside_interior_margin(p.position, scene.grid)) {
      throw ConfigError("particle " + std::to_string(i) + " at " + vec_to_string(p.position) +
                        " is outside the grid interior margin");
    }
    if (!(p.mass > 0.0) || !(p.initial_volume > 0.0)) {
      throw ConfigError("particle " + std::to_string(i) + " needs positive mass and volume");
    }
  }
  for (const ForceField& f : scene.external_forces) {
    if (f.t_start > f.t_end) throw ConfigError("force field window has t_start > t_end");
    if (f.region) {
      const Vec3 ext = scene.grid.extent();
      const bool disjoint = (f.region->upper.array() < 0.0).any() ||
                            (f.region->lower.array() > ext.array()).any() ||
                            (f.region->lower.array() > f.region->upper.array()).any();
      if (disjoint) throw ConfigError("force field region does not intersect the grid");
    }
  }
}

Vec3 Placement::apply(const Vec3& x) const {
  return rotation.toRotationMatrix() * (uniform_scale * x) + translation +
         Vec3(0.0, drop_height, 0.0);
}

Bounds bounding_box(std::span<const Vec3> positions) {
  Bounds b{Vec3::Constant(std::numeric_limits<double>::infinity()),
           Vec3::Constant(-std::numeric_limits<double>::infinity())};
  for (const Vec3& x : positions) {
    b.lower = b.lower.cwiseMin(x);
    b.upper = b.upper.cwiseMax(x);
  }
  return b;
}

Bounds bounding_box(std::span<const Particle> particles) {
  Bounds b{Vec3::Constant(std::numeric_limits<double>::infinity()),
           Vec3::Constant(-std::numeric_limits<double>::infinity())};
  for (const Particle& p : particles) {
    b.lower = b.lower.cwiseMin(p.position);
    b.upper = b.upper.cwiseMax(p.position);
  }
  return b;
}

ParticleSet make_cloud(std::span<const Vec3> positions, PartLabel part, double density) {
  if (positions.empty()) throw ConfigError("particle cloud is empty");
  if (!(density > 0.0)) throw ParameterDomainError("density must be > 0");
  const Bounds b = bounding_box(positions);
  const Vec3 size = b.size();
  const double bounding_volume = size.x() * size.y() * size.z();
  if (!(bounding_volume > 0.0)) {
    throw ConfigError("particle cloud has zero bounding volume; cannot assign particle volumes");
  }
  const double volume = bounding_volume * kFillFactor / static_cast<double>(positions.size());
  ParticleSet out;
  out.reserve(positions.size());
  for (const Vec3& x : positions) out.push_back(make_particle(x, density * volume, volume, part));
  return out;
}

std::vector<Vec3> read_cloud_positions(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("particle file not found: " + path.string());
  bool is_ply = has_extension(path, ".ply");
  if (!is_ply && !has_extension(path, ".csv")) {
    std::ifstream probe(path, std::ios::binary);
    char magic[4] = {};
    probe.read(magic, 3);
    is_ply = std::string(magic, 3) == "ply";
  }
  if (!is_ply) return read_csv_positions(path);
  const PlyFrame frame = read_frame_ply(path);
  std::vector<Vec3> out;
  out.reserve(frame.particles.size());
  for (const Particle& p : frame.particles) out.push_back(p.position);
  return out;
}

ParticleSet load_particle_cloud(const std::filesystem::path& path, PartLabel part,
                                double density) {
  const std::vector<Vec3> positions = read_cloud_positions(path);
  if (positions.empty()) throw ConfigError("particle file " + path.string() + " holds no particles");
  return make_cloud(positions, part, density);
}

void write_particle_csv(const std::filesystem::path& path, std::span<const Particle> particles) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (f == nullptr) throw ConfigError("cannot write " + path.string());
  std::fputs("x,y,z,vx,vy,vz\n", f);
  for (const Particle& p : particles) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.position.x(), p.position.y(),
                 p.position.z(), p.velocity.x(), p.velocity.y(), p.velocity.z());
  }
  std::fclose(f);
}

Scene compose_scene(const Scene& background, const ParticleSet& foreground,
                    const Placement& placement, const PartMaterialMap& foreground_materials) {
  if (!(placement.uniform_scale > 0.0)) throw ParameterDomainError("placement scale must be > 0");
  if (std::abs(placement.rotation.norm() - 1.0) > 1e-10) {
    throw ParameterDomainError("placement rotation must be a unit quaternion");
  }
  if (placement.drop_height < 0.0) throw ParameterDomainError("drop_height must be >= 0");

  std::set<PartLabel> fg_labels;
  for (const Particle& p : foreground) fg_labels.insert(p.part);
  for (PartLabel label : fg_labels) {
    bool in_background = background.materials.contains(label);
    for (const Particle& p : background.particles) in_background |= p.part == label;
    if (in_background) {
      throw ConfigError("foreground part label " + std::to_string(label) +
                        " is already used by the background");
    }
    if (!foreground_materials.contains(label)) {
      throw ConfigError("no material given for foreground part " + std::to_string(label));
    }
  }

  ParticleSet placed;
  placed.reserve(foreground.size());
  const double volume_scale = std::pow(placement.uniform_scale, 3);
  for (const Particle& p : foreground) {
    Particle q = p;
    q.position = placement.apply(p.position);
    q.initial_volume = p.initial_volume * volume_scale;
    q.mass = foreground_materials.at(p.part).density() * q.initial_volume;
    placed.push_back(q);
  }
  if (!placed.empty()) {
    const Bounds b = bounding_box(std::span<const Particle>(placed));
    if (!inside_interior_margin(b.lower, background.grid) ||
        !inside_interior_margin(b.upper, background.grid)) {
      const double margin = kInteriorMarginCells * background.grid.spacing;
      throw ConfigError("placed foreground spans " + vec_to_string(b.lower) + " to " +
                        vec_to_string(b.upper) + ", outside the allowed region " +
                        vec_to_string(Vec3::Constant(margin)) + " to " +
                        vec_to_string(background.grid.extent() - Vec3::Constant(margin)));
    }
  }

  Scene out = background;
  out.particles.insert(out.particles.end(), placed.begin(), placed.end());
  for (PartLabel label : fg_labels) {
    out.materials = assign_part_material(out.materials, label, foreground_materials.at(label));
  }
  return out;
}

Scene compose_scene(const Scene& background, const ParticleSet& foreground,
                    const Placement& placement, const MaterialParams& material) {
  PartMaterialMap map;
  for (const Particle& p : foreground) {
    if (!map.contains(p.part)) map = assign_part_material(map, p.part, material);
  }
  return compose_scene(background, foreground, placement, map);
}

SegmentationResult apply_segmentation_labels(const ParticleSet& particles,
                                             const std::filesystem::path& labels) {
  std::ifstream in(labels);
  if (!in) throw ConfigError("cannot open label file " + labels.string());
  std::vector<PartLabel> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t last_nonempty = 0;
  std::vector<std::string> raw;
  while (std::getline(in, line)) {
    ++line_no;
    raw.push_back(line);
    if (!trim(line).empty()) last_nonempty = line_no;
  }
  for (std::size_t i = 0; i < last_nonempty; ++i) {
    const std::string_view text = trim(raw[i]);
    PartLabel value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
      throw ParseError(labels.string(), i + 1, 1,
                       "expected a non-negative integer label, got '" + std::string(text) + "'");
    }
    rows.push_back(value);
  }
  if (rows.size() != particles.size()) {
    throw ShapeError("label file " + labels.string() + " has " + std::to_string(rows.size()) +
                     " rows but there are " + std::to_string(particles.size()) + " particles");
  }
  SegmentationResult out;
  out.particles = particles;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.particles[i].part = rows[i];
    out.labels.insert(rows[i]);
  }
  return out;
}

std::vector<Vec3> sample_box(const Vec3& lower, const Vec3& upper, double spacing) {
  if (!(spacing > 0.0)) throw ParameterDomainError("sampling spacing must be > 0");
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a) {
    n[a] = std::max(1, static_cast<int>(std::floor((upper[a] - lower[a]) / spacing + 1e-9)) + 1);
  }
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int i = 0; i < n[0]; ++i) {
    for (int j = 0; j < n[1]; ++j) {
      for (int k = 0; k < n[2]; ++k) {
        out.push_back(lower + spacing * Vec3(i, j, k));
      }
    }
  }
  return out;
}

std::vector<Vec3> sample_sphere(const Vec3& center, double radius, double spacing) {
  std::vector<Vec3> out;
  const int half = static_cast<int>(std::floor(radius / spacing));
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      for (int k = -half; k <= half; ++k) {
        const Vec3 d = spacing * Vec3(i, j, k);
        if (d.norm() <= radius) out.push_back(center + d);
      }
    }
  }
  return out;
}

}  // namespace interplay
