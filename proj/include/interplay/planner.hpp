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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "interplay/raster.hpp"
#include "interplay/split_ratio.hpp"

namespace interplay {

enum class FeatureTag {
  kGranular,
  kDeformableSolid,
  kFluid,
  kGas,
  kRigid,
  kWind,
  kLightDynamics,
  kMechanicalForce,
  kSimpleShape,
  kComplexShape,
  kSurfaceTension,
  kSimulationEasy,
  kSimulationHard,
};

std::string_view to_string(FeatureTag tag);
// Accepts the snake_case names ("deformable_solid"); nullopt otherwise.
std::optional<FeatureTag> parse_feature_tag(std::string_view name);

struct Extent {
  int width = 0;
  int height = 0;
};

struct ScenarioRequest {
  std::string fg_description;
  std::string bg_description;
  std::set<FeatureTag> feature_tags;
  std::optional<Image> bg_image;
  std::optional<Image> fg_image;
  // Placement hints for the rule engine's Motion branch.
  std::string split_ratio = "1";
  std::vector<std::vector<std::string>> region_tags;  // keywords per region
  std::optional<Extent> fg_extent;                    // defaults to fg_image size

  // Throws ConfigError when descriptions and tags are all empty.
  void validate() const;
};

enum class Method { kPhys, kMotion };

// Wire names "InteractPhys" / "InteractMotion".
std::string_view to_string(Method method);

struct PhysBranch {
  std::vector<std::string> segmentation_prompts;
};

struct MotionBranch {
  std::string split_ratio;
  int region = 0;
  std::optional<Rect> placement;  // pixel rectangle when a background image was scored
};

struct PlannerDecision {
  std::string rationale;
  std::variant<PhysBranch, MotionBranch> branch;

  Method method() const { return branch.index() == 0 ? Method::kPhys : Method::kMotion; }
  const PhysBranch* phys() const { return std::get_if<PhysBranch>(&branch); }
  const MotionBranch* motion() const { return std::get_if<MotionBranch>(&branch); }
};

// Full planner prompt: role, task, format schema, both worked scenarios, the
// routing rules, then the request. Deterministic.
std::string render_prompt(const ScenarioRequest& request);

struct RuleScore {
  int phys = 0;
  int motion = 0;
};

RuleScore rule_score(const std::set<FeatureTag>& tags);

// Tag-count routing; ties go to Motion. Phys prompts are the two descriptions.
// Motion placement comes from select_region when a background image is given,
// else region 0 of the requested split. Throws ConfigError on empty tags.
PlannerDecision rule_decide(const ScenarioRequest& request);

// Keywords that favour motion-rich insertion.
const std::set<std::string>& motion_affordance_keywords();

// Lowercase words of a region subprompt, minus short and filler words.
std::vector<std::string> region_tags_from_subprompt(std::string_view subprompt);

struct RegionScoring {
  double free_weight = 0.5;
  double affordance_weight = 0.5;
  int gradient_threshold = 16;  // luma step below which a pixel counts as free
};

struct RegionChoice {
  int region = 0;
  Rect region_rect;
  Rect placement;               // fg-sized rect centred in the region
  std::vector<double> scores;   // per region; negative when infeasible
};

// A pixel is free when its luma differs from its right and lower neighbours by
// less than the threshold.
Mask free_pixels(const Image& image, int threshold);

// Picks the feasible region (free pixels >= fg area and fg fits) with the best
// free_weight * free_fraction + affordance_weight * matched_tag_fraction.
// Ties go to the lower index. Throws ConfigError when no region fits.
RegionChoice select_region(const Image& bg, Extent fg, const SplitRatio& split,
                           const std::vector<std::vector<std::string>>& region_tags = {},
                           const RegionScoring& scoring = {});

struct IntermediateComposite {
  Image image;
  Mask mask;  // 1 outside rect, 0 inside
};

// Alpha-composites fg (resized to rect) into a copy of bg. Throws ShapeError
// with the overflow when rect leaves the image.
IntermediateComposite compose_intermediate(const Image& bg, const Image& fg, const Rect& rect);

// key = value text for downstream stages.
std::string format_decision(const PlannerDecision& decision);

}  // namespace interplay
