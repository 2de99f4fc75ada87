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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interplay/materials.hpp"

namespace interplay {

class ChatBackend;

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { kPlan, kSimulate, kOptimize, kInpaint, kPipeline };

std::string_view to_string(Mode mode);

struct PipelineConfig {
  Mode mode = Mode::kPipeline;
  std::filesystem::path config_path;  // scene config; optional for inpaint
  std::filesystem::path out_dir = "out";
  std::vector<std::string> overrides;  // block.key=value
  std::uint64_t seed = 0;
  bool offline = false;

  // inpaint inputs; fall back to the config's scenario/motion blocks
  std::filesystem::path composite;
  std::filesystem::path mask;
  std::optional<int> frames;
  std::optional<int> steps;
  std::optional<std::string> denoiser;

  // optimize inputs; fall back to the config's optimize block
  std::filesystem::path reference;
  std::optional<PartLabel> part;
  std::optional<int> iterations;
  std::optional<double> step_size;

  // Throws ConfigError when a referenced path is missing or the output
  // directory cannot be created.
  void validate() const;
};

// Ordered key = value lines. Keys under "timing." carry wall-clock data and
// are the only lines that differ between identical runs.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  std::string text() const;
  void write(const std::filesystem::path& path) const;
  const std::string* get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Drops "timing." lines, for comparing manifests of two runs.
std::string strip_timing(const std::string& manifest_text);

struct PipelineResult {
  int exit_code = 0;
  std::filesystem::path manifest_path;
  Manifest manifest;
  std::string error;
};

// Runs the stage(s) of `config.mode`, writing artifacts and manifest.txt into
// out_dir. Never throws for stage failures: they set exit_code = 1 and are
// recorded in the manifest. `backend` overrides the environment-configured
// planner service; with neither (or offline) the rule engine decides.
PipelineResult run_pipeline(const PipelineConfig& config, ChatBackend* backend = nullptr);

}  // namespace interplay
