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

#include "interplay/planner.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "interplay/errors.hpp"

namespace interplay {

namespace {

#include "prompt_template.inc"

struct TagName {
  FeatureTag tag;
  std::string_view name;
};

constexpr std::array<TagName, 13> kTagNames{{
    {FeatureTag::kGranular, "granular"},
    {FeatureTag::kDeformableSolid, "deformable_solid"},
    {FeatureTag::kFluid, "fluid"},
    {FeatureTag::kGas, "gas"},
    {FeatureTag::kRigid, "rigid"},
    {FeatureTag::kWind, "wind"},
    {FeatureTag::kLightDynamics, "light_dynamics"},
    {FeatureTag::kMechanicalForce, "mechanical_force"},
    {FeatureTag::kSimpleShape, "simple_shape"},
    {FeatureTag::kComplexShape, "complex_shape"},
    {FeatureTag::kSurfaceTension, "surface_tension"},
    {FeatureTag::kSimulationEasy, "simulation_easy"},
    {FeatureTag::kSimulationHard, "simulation_hard"},
}};

constexpr std::array<FeatureTag, 5> kPhysTags{FeatureTag::kGranular, FeatureTag::kDeformableSolid,
                                              FeatureTag::kRigid, FeatureTag::kMechanicalForce,
                                              FeatureTag::kSimulationEasy};

constexpr std::array<FeatureTag, 7> kMotionTags{
    FeatureTag::kFluid,          FeatureTag::kGas,          FeatureTag::kWind,
    FeatureTag::kLightDynamics,  FeatureTag::kSurfaceTension, FeatureTag::kComplexShape,
    FeatureTag::kSimulationHard};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double luma(const Image& img, int x, int y) {
  if (img.channels == 1) return img.at(x, y, 0);
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
}

}  // namespace

std::string_view to_string(FeatureTag tag) {
  for (const TagName& t : kTagNames) {
    if (t.tag == tag) return t.name;
  }
  return "unknown";
}

std::optional<FeatureTag> parse_feature_tag(std::string_view name) {
  for (const TagName& t : kTagNames) {
    if (t.name == name) return t.tag;
  }
  return std::nullopt;
}

void ScenarioRequest::validate() const {
  if (fg_description.empty() && bg_description.empty() && feature_tags.empty()) {
    throw ConfigError("scenario needs a description or at least one feature tag");
  }
}

std::string_view to_string(Method method) {
  return method == Method::kPhys ? "InteractPhys" : "InteractMotion";
}

std::string render_prompt(const ScenarioRequest& request) {
  request.validate();
  std::string out;
  out += kPromptRole;
  out += '\n';
  out += kPromptTask;
  out += '\n';
  out += kPromptFormat;
  out += '\n';
  out += kPromptRule;
  out += "These are some examples:\n\n";
  out += kScenario1;
  out += '\n';
  out += kPromptRule;
  out += kScenario2;
  out += '\n';
  out += kPromptRule;
  out += kPromptRules;
  out += '\n';
  out += kPromptRule;
  out += "Scenario to evaluate:\n";
  if (!request.fg_description.empty()) {
    out += "Foreground: " + request.fg_description + "\n";
  }
  if (!request.bg_description.empty()) {
    out += "Background: " + request.bg_description + "\n";
  }
  if (!request.feature_tags.empty()) {
    out += "Observed features:";
    bool first = true;
    for (const TagName& t : kTagNames) {
      if (!request.feature_tags.contains(t.tag)) continue;
      out += first ? " " : ", ";
      out += t.name;
      first = false;
    }
    out += "\n";
  }
  out += '\n';
  out += kPromptClosing;
  return out;
}

RuleScore rule_score(const std::set<FeatureTag>& tags) {
  RuleScore score;
  for (FeatureTag t : kPhysTags) score.phys += tags.contains(t);
  for (FeatureTag t : kMotionTags) score.motion += tags.contains(t);
  return score;
}

PlannerDecision rule_decide(const ScenarioRequest& request) {
  if (request.feature_tags.empty()) {
    throw ConfigError("rule engine needs feature tags; use the planner service for untagged requests");
  }
  const RuleScore score = rule_score(request.feature_tags);
  PlannerDecision decision;
  decision.rationale = "rule engine: phys score " + std::to_string(score.phys) +
                       ", motion score " + std::to_string(score.motion);
  if (score.phys > score.motion) {
    PhysBranch phys;
    if (!request.fg_description.empty()) phys.segmentation_prompts.push_back(request.fg_description);
    if (!request.bg_description.empty()) phys.segmentation_prompts.push_back(request.bg_description);
    decision.branch = phys;
    return decision;
  }
  const SplitRatio split = parse_split_ratio(request.split_ratio);
  MotionBranch motion;
  motion.split_ratio = to_string(split);
  std::optional<Extent> fg = request.fg_extent;
  if (!fg && request.fg_image) fg = Extent{request.fg_image->width, request.fg_image->height};
  if (request.bg_image && fg) {
    const RegionChoice choice = select_region(*request.bg_image, *fg, split, request.region_tags);
    motion.region = choice.region;
    motion.placement = choice.placement;
  }
  decision.branch = motion;
  return decision;
}

const std::set<std::string>& motion_affordance_keywords() {
  static const std::set<std::string> words{
      "air",   "breeze", "cloud",  "current", "field", "flag",  "flow",   "fountain",
      "grass", "lake",   "leaves", "liquid",  "ocean", "pool",  "rain",   "river",
      "sea",   "sky",    "smoke",  "splash",  "steam", "surface", "tree", "water",
      "wave",  "waves",  "wind",   "glass",   "open",  "space", "meadow", "stream"};
  return words;
}

std::vector<std::string> region_tags_from_subprompt(std::string_view subprompt) {
  static const std::set<std::string> filler{"the", "and", "with", "for", "from", "into", "onto",
                                            "that", "this", "its", "are", "has", "have", "over",
                                            "under", "near", "some", "there", "which", "while"};
  std::vector<std::string> tags;
  std::string word;
  auto flush = [&] {
    if (word.size() >= 3 && !filler.contains(word)) tags.push_back(word);
    word.clear();
  };
  for (char c : subprompt) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  return tags;
}

Mask free_pixels(const Image& image, int threshold) {
  Mask out(image.width, image.height, 0);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const double here = luma(image, x, y);
      double step = 0.0;
      if (x + 1 < image.width) step = std::max(step, std::abs(luma(image, x + 1, y) - here));
      if (y + 1 < image.height) step = std::max(step, std::abs(luma(image, x, y + 1) - here));
      out.at(x, y) = step < threshold ? 1 : 0;
    }
  }
  return out;
}

RegionChoice select_region(const Image& bg, Extent fg, const SplitRatio& split,
                           const std::vector<std::vector<std::string>>& region_tags,
                           const RegionScoring& scoring) {
  if (fg.width <= 0 || fg.height <= 0) throw ShapeError("foreground extent must be positive");
  const std::vector<Rect> regions = split_regions(split, bg.width, bg.height);
  const Mask free = free_pixels(bg, scoring.gradient_threshold);
  const auto& keywords = motion_affordance_keywords();
  const long fg_area = static_cast<long>(fg.width) * fg.height;

  RegionChoice choice;
  choice.region = -1;
  double best = -1.0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Rect& rect = regions[r];
    long free_count = 0;
    for (int y = rect.y; y < rect.y + rect.height; ++y) {
      for (int x = rect.x; x < rect.x + rect.width; ++x) free_count += free.at(x, y);
    }
    const bool fits = fg.width <= rect.width && fg.height <= rect.height && free_count >= fg_area;
    if (!fits) {
      choice.scores.push_back(-1.0);
      continue;
    }
    double affordance = 0.0;
    if (r < region_tags.size() && !region_tags[r].empty()) {
      int matched = 0;
      for (const std::string& tag : region_tags[r]) matched += keywords.contains(lower(tag));
      affordance = static_cast<double>(matched) / static_cast<double>(region_tags[r].size());
    }
    const double score = scoring.free_weight * static_cast<double>(free_count) /
                             static_cast<double>(rect.area()) +
                         scoring.affordance_weight * affordance;
    choice.scores.push_back(score);
    if (score > best) {
      best = score;
      choice.region = static_cast<int>(r);
    }
  }
  if (choice.region < 0) {
    throw ConfigError("foreground " + std::to_string(fg.width) + "x" + std::to_string(fg.height) +
                      " fits no region; reduce its scale");
  }
  const Rect& rect = regions[static_cast<std::size_t>(choice.region)];
  choice.region_rect = rect;
  choice.placement = Rect{rect.x + (rect.width - fg.width) / 2,
                          rect.y + (rect.height - fg.height) / 2, fg.width, fg.height};
  return choice;
}

IntermediateComposite compose_intermediate(const Image& bg, const Image& fg, const Rect& rect) {
  const int over_x = std::max({0, -rect.x, rect.x + rect.width - bg.width});
  const int over_y = std::max({0, -rect.y, rect.y + rect.height - bg.height});
  if (over_x > 0 || over_y > 0 || rect.width <= 0 || rect.height <= 0) {
    throw ShapeError("rect " + to_string(rect) + " leaves the " + std::to_string(bg.width) + "x" +
                     std::to_string(bg.height) + " image by " + std::to_string(over_x) +
                     " px horizontally and " + std::to_string(over_y) + " px vertically");
  }
  const Image src = resize_nearest(fg, rect.width, rect.height);
  IntermediateComposite out{bg, Mask(bg.width, bg.height, 1)};
  const int color = std::min(bg.channels, 3);
  for (int y = 0; y < rect.height; ++y) {
    for (int x = 0; x < rect.width; ++x) {
      const int bx = rect.x + x;
      const int by = rect.y + y;
      out.mask.at(bx, by) = 0;
      const unsigned a = src.channels == 4 ? src.at(x, y, 3) : 255u;
      for (int c = 0; c < color; ++c) {
        const unsigned f = src.at(x, y, src.channels == 1 ? 0 : c);
        const unsigned b = bg.at(bx, by, c);
        out.image.at(bx, by, c) = static_cast<std::uint8_t>((f * a + b * (255u - a) + 127u) / 255u);
      }
    }
  }
  return out;
}

std::string format_decision(const PlannerDecision& decision) {
  std::string out = "method = " + std::string(to_string(decision.method())) + "\n";
  std::string rationale = decision.rationale;
  std::replace(rationale.begin(), rationale.end(), '\n', ' ');
  out += "rationale = " + rationale + "\n";
  if (const PhysBranch* phys = decision.phys()) {
    out += "segmentation_prompts = " + std::to_string(phys->segmentation_prompts.size()) + "\n";
    for (std::size_t i = 0; i < phys->segmentation_prompts.size(); ++i) {
      out += "segmentation_prompt." + std::to_string(i) + " = " + phys->segmentation_prompts[i] +
             "\n";
    }
  } else if (const MotionBranch* motion = decision.motion()) {
    out += "split_ratio = " + motion->split_ratio + "\n";
    out += "region = " + std::to_string(motion->region) + "\n";
    if (motion->placement) out += "placement = " + to_string(*motion->placement) + "\n";
  }
  return out;
}

}  // namespace interplay
