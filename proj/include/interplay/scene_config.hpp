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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "interplay/optimize.hpp"
#include "interplay/planner.hpp"
#include "interplay/scene.hpp"

namespace interplay {

// Scene configuration text:
//
//   # comment
//   kind [name] {
//     key = value
//   }
//
// Block kinds: grid, gravity, sim, scenario, motion, optimize (unnamed) and
// material, object, force (named). Values run to the end of the line.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;    // 0 for command-line overrides
  std::size_t column = 0;  // of the value
};

struct ConfigBlock {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(std::string_view key) const;
  std::string label() const { return name.empty() ? kind : kind + " " + name; }
};

struct ConfigDocument {
  std::string source;
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::vector<ConfigBlock> blocks;
};

// Throws ParseError with line and column on malformed text, unknown block
// kinds and duplicate keys.
ConfigDocument parse_config_text(std::string_view text, const std::string& source,
                                 const std::filesystem::path& base_dir = {});
ConfigDocument parse_config_file(const std::filesystem::path& path);

// "kind.key=value" or "kind.name.key=value"; replaces or adds the entry.
// Unnamed blocks are created on demand; a missing named block is a ConfigError.
void apply_override(ConfigDocument& doc, std::string_view assignment);

struct ObjectSpec {
  std::string name;
  std::filesystem::path cloud;     // either a cloud file ...
  std::string shape;               // ... or "sphere" / "box"
  double radius = 0.0;
  Vec3 size = Vec3::Zero();
  double spacing = 0.0;            // shape sampling spacing; 0 means h / 2
  std::string material;
  PartLabel label = 0;
  Placement placement;
  std::filesystem::path labels_file;
  std::map<PartLabel, std::string> part_materials;
};

struct SimSettings {
  double dt = 1e-3;
  int steps = 100;
  int frame_stride = 10;
  int threads = 1;
};

struct ScenarioSpec {
  std::string foreground;
  std::string background;
  std::set<FeatureTag> tags;
  std::filesystem::path background_image;
  std::filesystem::path foreground_image;
  double foreground_scale = 1.0;
  std::string split_ratio = "1";
  std::vector<std::vector<std::string>> region_tags;
};

struct MotionSettings {
  int frames = 25;
  int steps = 25;
  std::string denoiser = "drift";
  double schedule_end = 1e-4;
  int threads = 1;
};

struct OptimizeSettings {
  std::filesystem::path reference;
  std::vector<PartLabel> parts{0};
  FreeCoordinates free;
  int iterations = 10;
  double step_size = 0.1;
  double log_eps = 1e-2;
  double poisson_eps = 1e-3;
  int threads = 1;
};

struct SceneConfig {
  std::string source;
  GridSpec grid;
  BoundaryConfig boundary;
  Vec3 gravity = Vec3(0.0, -9.8, 0.0);
  std::map<std::string, MaterialParams> materials;
  std::vector<ObjectSpec> objects;
  std::vector<ForceField> forces;
  SimSettings sim;
  std::optional<ScenarioSpec> scenario;
  MotionSettings motion;
  OptimizeSettings optimize;
};

// Semantic pass: every material validated, every referenced file
// stat-checked. Throws ParseError for malformed values (with line/column) and
// ConfigError naming block and field otherwise.
SceneConfig interpret_config(const ConfigDocument& doc);

// parse_config_file + overrides + interpret_config.
SceneConfig load_scene_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides = {});

// Empty background with the config's grid, boundary, gravity and forces,
// then every object composed in file order. Validated.
Scene build_scene(const SceneConfig& config);

// Planner request from the scenario block, images loaded. ConfigError when
// the config has no scenario block.
ScenarioRequest build_request(const SceneConfig& config);

}  // namespace interplay
