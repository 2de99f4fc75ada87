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

#include "interplay/trajectory_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "interplay/errors.hpp"

namespace interplay {

namespace {

static_assert(std::endian::native == std::endian::little,
              "PLY writer assumes a little-endian host");

enum class PlyType { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32, kFloat32, kFloat64 };

std::size_t type_size(PlyType t) {
  switch (t) {
    case PlyType::kInt8:
    case PlyType::kUInt8:
      return 1;
    case PlyType::kInt16:
    case PlyType::kUInt16:
      return 2;
    case PlyType::kInt32:
    case PlyType::kUInt32:
    case PlyType::kFloat32:
      return 4;
    case PlyType::kFloat64:
      return 8;
  }
  return 0;
}

bool parse_type(const std::string& name, PlyType& out) {
  static const std::map<std::string, PlyType> kTypes = {
      {"char", PlyType::kInt8},      {"int8", PlyType::kInt8},
      {"uchar", PlyType::kUInt8},    {"uint8", PlyType::kUInt8},
      {"short", PlyType::kInt16},    {"int16", PlyType::kInt16},
      {"ushort", PlyType::kUInt16},  {"uint16", PlyType::kUInt16},
      {"int", PlyType::kInt32},      {"int32", PlyType::kInt32},
      {"uint", PlyType::kUInt32},    {"uint32", PlyType::kUInt32},
      {"float", PlyType::kFloat32},  {"float32", PlyType::kFloat32},
      {"double", PlyType::kFloat64}, {"float64", PlyType::kFloat64}};
  auto it = kTypes.find(name);
  if (it == kTypes.end()) return false;
  out = it->second;
  return true;
}

double decode(PlyType t, const unsigned char* bytes) {
  switch (t) {
    case PlyType::kInt8: {
      std::int8_t v;
      std::memcpy(&v, bytes, 1);
      return v;
    }
    case PlyType::kUInt8:
      return bytes[0];
    case PlyType::kInt16: {
      std::int16_t v;
      std::memcpy(&v, bytes, 2);
      return v;
    }
    case PlyType::kUInt16: {
      std::uint16_t v;
      std::memcpy(&v, bytes, 2);
      return v;
    }
    case PlyType::kInt32: {
      std::int32_t v;
      std::memcpy(&v, bytes, 4);
      return v;
    }
    case PlyType::kUInt32: {
      std::uint32_t v;
      std::memcpy(&v, bytes, 4);
      return v;
    }
    case PlyType::kFloat32: {
      float v;
      std::memcpy(&v, bytes, 4);
      return v;
    }
    case PlyType::kFloat64: {
      double v;
      std::memcpy(&v, bytes, 8);
      return v;
    }
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type;
};

std::string frame_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05zu.ply", index);
  return buf;
}

}  // namespace

void write_frame_ply(const std::filesystem::path& path, std::span<const Particle> particles,
                     std::size_t frame_index, double time, double dt, int frame_stride) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (f == nullptr) throw ConfigError("cannot write " + path.string());
  std::fprintf(f,
               "ply\nformat binary_little_endian 1.0\n"
               "comment frame %zu time %.17g dt %.17g stride %d\n"
               "element vertex %zu\n"
               "property double x\nproperty double y\nproperty double z\n"
               "property double vx\nproperty double vy\nproperty double vz\n"
               "property int part\nend_header\n",
               frame_index, time, dt, frame_stride, particles.size());
  unsigned char record[6 * 8 + 4];
  for (const Particle& p : particles) {
    const double values[6] = {p.position.x(), p.position.y(), p.position.z(),
                              p.velocity.x(), p.velocity.y(), p.velocity.z()};
    std::memcpy(record, values, sizeof(values));
    const std::int32_t part = p.part;
    std::memcpy(record + sizeof(values), &part, 4);
    std::fwrite(record, 1, sizeof(record), f);
  }
  if (std::fclose(f) != 0) throw ConfigError("failed writing " + path.string());
}

PlyFrame read_frame_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  const std::string source = path.string();

  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line() || line != "ply") throw ParseError(source, 1, 1, "missing 'ply' magic");

  PlyFrame frame;
  bool binary = false;
  bool have_format = false;
  bool in_vertex = false;
  bool vertex_seen = false;
  std::size_t vertex_count = 0;
  std::vector<PlyProperty> props;
  while (true) {
    if (!next_line()) throw ParseError(source, line_no, 0, "unexpected end of header");
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "end_header") break;
    if (keyword == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "binary_little_endian") {
        binary = true;
      } else if (fmt != "ascii") {
        throw ParseError(source, line_no, 8, "unsupported PLY format '" + fmt + "'");
      }
      have_format = true;
    } else if (keyword == "comment") {
      std::string tag;
      ls >> tag;
      if (tag == "frame") {
        std::string key;
        ls >> frame.frame_index;
        while (ls >> key) {
          if (key == "time") ls >> frame.time;
          else if (key == "dt") ls >> frame.dt;
          else if (key == "stride") ls >> frame.frame_stride;
        }
      }
    } else if (keyword == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      in_vertex = name == "vertex";
      if (in_vertex) {
        if (vertex_seen) throw ParseError(source, line_no, 1, "duplicate vertex element");
        vertex_seen = true;
        vertex_count = count;
      } else if (!vertex_seen) {
        throw ParseError(source, line_no, 1, "vertex must be the first element");
      }
    } else if (keyword == "property") {
      if (!in_vertex) continue;
      std::string type_name, name;
      ls >> type_name;
      if (type_name == "list") {
        throw ParseError(source, line_no, 10, "list properties are not supported on vertices");
      }
      ls >> name;
      PlyType type;
      if (!parse_type(type_name, type)) {
        throw ParseError(source, line_no, 10, "unknown property type '" + type_name + "'");
      }
      props.push_back({name, type});
    } else if (keyword != "obj_info") {
      throw ParseError(source, line_no, 1, "unexpected header line '" + line + "'");
    }
  }
  if (!have_format) throw ParseError(source, line_no, 0, "missing format line");
  if (!vertex_seen) throw ParseError(source, line_no, 0, "no vertex element");

  std::array<int, 7> slot;
  slot.fill(-1);
  const char* names[7] = {"x", "y", "z", "vx", "vy", "vz", "part"};
  for (std::size_t i = 0; i < props.size(); ++i) {
    for (int s = 0; s < 7; ++s) {
      if (props[i].name == names[s] || (s == 6 && props[i].name == "label")) {
        slot[s] = static_cast<int>(i);
      }
    }
  }
  for (int s = 0; s < 3; ++s) {
    if (slot[s] < 0) {
      throw ParseError(source, line_no, 0, std::string("missing vertex property ") + names[s]);
    }
  }

  frame.particles.resize(vertex_count);
  std::vector<double> values(props.size());
  std::size_t record_size = 0;
  for (const auto& p : props) record_size += type_size(p.type);
  std::vector<unsigned char> record(record_size);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (binary) {
      in.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(record_size));
      if (in.gcount() != static_cast<std::streamsize>(record_size)) {
        throw ParseError(source, 0, 0,
                         "truncated vertex data at vertex " + std::to_string(v) + " (offset " +
                             std::to_string(v * record_size) + " bytes into the body)");
      }
      std::size_t offset = 0;
      for (std::size_t i = 0; i < props.size(); ++i) {
        values[i] = decode(props[i].type, record.data() + offset);
        offset += type_size(props[i].type);
      }
    } else {
      if (!next_line()) throw ParseError(source, line_no, 0, "truncated vertex data");
      std::istringstream ls(line);
      for (std::size_t i = 0; i < props.size(); ++i) {
        if (!(ls >> values[i])) {
          throw ParseError(source, line_no, 0, "malformed vertex row");
        }
      }
    }
    Particle& p = frame.particles[v];
    p.position = Vec3(values[slot[0]], values[slot[1]], values[slot[2]]);
    if (slot[3] >= 0 && slot[4] >= 0 && slot[5] >= 0) {
      p.velocity = Vec3(values[slot[3]], values[slot[4]], values[slot[5]]);
    }
    if (slot[6] >= 0) p.part = static_cast<PartLabel>(values[slot[6]]);
  }
  return frame;
}

void write_summary_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (f == nullptr) throw ConfigError("cannot write " + path.string());
  std::fputs("frame,time,total_mass,momentum_x,momentum_y,momentum_z,com_x,com_y,com_z\n", f);
  for (std::size_t i = 0; i < trajectory.frames.size(); ++i) {
    const ParticleSet& ps = trajectory.frames[i];
    const Vec3 mom = total_momentum(ps);
    const Vec3 com = center_of_mass(ps);
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                 trajectory.times[i], total_mass(ps), mom.x(), mom.y(), mom.z(), com.x(), com.y(),
                 com.z());
  }
  std::fclose(f);
}

std::vector<std::filesystem::path> export_trajectory(const std::filesystem::path& dir,
                                                     const Trajectory& trajectory) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < trajectory.frames.size(); ++i) {
    const auto path = dir / frame_file_name(i);
    write_frame_ply(path, trajectory.frames[i], i, trajectory.times[i], trajectory.dt,
                    trajectory.frame_stride);
    written.push_back(path);
  }
  const auto summary = dir / "summary.csv";
  write_summary_csv(summary, trajectory);
  written.push_back(summary);
  return written;
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("trajectory directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("frame_", 0) == 0 && entry.path().extension() == ".ply") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no frame_*.ply files in " + dir.string());
  Trajectory traj;
  for (std::size_t i = 0; i < files.size(); ++i) {
    PlyFrame frame = read_frame_ply(files[i]);
    if (i == 0) {
      traj.dt = frame.dt;
      traj.frame_stride = frame.frame_stride;
    } else if (frame.particles.size() != traj.frames.front().size()) {
      throw ShapeError("frame " + files[i].string() + " has " +
                       std::to_string(frame.particles.size()) + " particles, expected " +
                       std::to_string(traj.frames.front().size()));
    }
    traj.times.push_back(frame.time);
    traj.frames.push_back(std::move(frame.particles));
  }
  return traj;
}

}  // namespace interplay
