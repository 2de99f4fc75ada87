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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "interplay/errors.hpp"
#include "interplay/planner.hpp"
#include "test_support.hpp"

namespace interplay {
namespace {

ScenarioRequest scenario1() {
  ScenarioRequest r;
  r.fg_description = "rubber ball";
  r.bg_description = "wood surface";
  r.feature_tags = {FeatureTag::kDeformableSolid, FeatureTag::kMechanicalForce,
                    FeatureTag::kSimpleShape};
  return r;
}

ScenarioRequest scenario2() {
  ScenarioRequest r;
  r.fg_description = "wine pouring from a wine glass";
  r.bg_description = "static glass of water";
  r.feature_tags = {FeatureTag::kFluid, FeatureTag::kSurfaceTension, FeatureTag::kSimulationHard};
  r.split_ratio = "1,(1,1); 2";
  return r;
}

TEST(FeatureTag, NamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(FeatureTag::kSimulationHard); ++i) {
    const auto tag = static_cast<FeatureTag>(i);
    EXPECT_EQ(parse_feature_tag(to_string(tag)), tag);
  }
  EXPECT_EQ(parse_feature_tag("deformable_solid"), FeatureTag::kDeformableSolid);
  EXPECT_FALSE(parse_feature_tag("jelly").has_value());
}

TEST(RenderPrompt, Deterministic) {
  EXPECT_EQ(render_prompt(scenario1()), render_prompt(scenario1()));
}

TEST(RenderPrompt, ContainsCriteriaHeadersScenariosAndFormat) {
  const std::string p = render_prompt(scenario2());
  for (const char* needle :
       {"Simulation complexity", "Material properties", "Object shape", "Environmental factors",
        "Scenario 1: A rubber ball (foreground), and a wooden floor (background).",
        "Scenario 2: Wine pouring from glass wine (foreground)", "Overall preferred method",
        "Role", "Task", "Format", "Foreground: wine pouring from a wine glass",
        "Background: static glass of water", "Observed features: fluid, surface_tension, simulation_hard"}) {
    EXPECT_NE(p.find(needle), std::string::npos) << needle;
  }
  EXPECT_LT(p.find("Role"), p.find("Task"));
  EXPECT_LT(p.find("Task"), p.find("Format"));
  EXPECT_LT(p.find("Format"), p.find("Scenario 1:"));
  EXPECT_LT(p.find("Scenario 1:"), p.find("Scenario 2:"));
}

TEST(RenderPrompt, EmptyTagsOmitTagBlock) {
  ScenarioRequest r = scenario1();
  r.feature_tags.clear();
  const std::string p = render_prompt(r);
  EXPECT_EQ(p.find("Observed features"), std::string::npos);
  EXPECT_NE(p.find("Foreground: rubber ball"), std::string::npos);
}

TEST(RenderPrompt, MatchesGoldenFile) {
  const std::string golden =
      test::read_file(std::filesystem::path(INTERPLAY_TEST_DATA) / "golden_prompt_scenario1.txt");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(render_prompt(scenario1()), golden);
}

TEST(ScenarioRequest, ValidateNeedsSomething) {
  EXPECT_THROW(ScenarioRequest{}.validate(), ConfigError);
  ScenarioRequest r;
  r.feature_tags = {FeatureTag::kWind};
  EXPECT_NO_THROW(r.validate());
}

TEST(RuleDecide, Scenario1IsPhysWithObjectPrompts) {
  const PlannerDecision d = rule_decide(scenario1());
  ASSERT_EQ(d.method(), Method::kPhys);
  EXPECT_EQ(d.phys()->segmentation_prompts, (std::vector<std::string>{"rubber ball", "wood surface"}));
  EXPECT_EQ(d.motion(), nullptr);
}

TEST(RuleDecide, Scenario2IsMotionRegion0) {
  const PlannerDecision d = rule_decide(scenario2());
  ASSERT_EQ(d.method(), Method::kMotion);
  EXPECT_EQ(d.motion()->region, 0);
  EXPECT_EQ(d.motion()->split_ratio, "1,(1,1); 2");
  EXPECT_EQ(d.phys(), nullptr);
}

TEST(RuleDecide, FlagInWindIsMotion) {
  ScenarioRequest r;
  r.feature_tags = {FeatureTag::kWind, FeatureTag::kComplexShape};
  EXPECT_EQ(rule_decide(r).method(), Method::kMotion);
}

TEST(RuleDecide, TieGoesToMotion) {
  ScenarioRequest r;
  r.feature_tags = {FeatureTag::kRigid, FeatureTag::kFluid};
  const RuleScore s = rule_score(r.feature_tags);
  EXPECT_EQ(s.phys, s.motion);
  EXPECT_EQ(rule_decide(r).method(), Method::kMotion);
}

TEST(RuleDecide, EmptyTagsPointToService) {
  ScenarioRequest r = scenario1();
  r.feature_tags.clear();
  try {
    rule_decide(r);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("service"), std::string::npos);
  }
}

TEST(RuleDecide, PureFunctionOfTagsWithOneBranch) {
  std::mt19937 rng(17);
  const int n = static_cast<int>(FeatureTag::kSimulationHard) + 1;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<FeatureTag> tags;
    for (int i = 0; i < n; ++i)
      if (rng() % 3 == 0) tags.push_back(static_cast<FeatureTag>(i));
    if (tags.empty()) continue;
    ScenarioRequest a;
    a.fg_description = "x";
    a.bg_description = "y";
    ScenarioRequest b;
    b.fg_description = "something else";
    b.bg_description = "entirely";
    std::shuffle(tags.begin(), tags.end(), rng);
    for (FeatureTag t : tags) a.feature_tags.insert(t);
    std::shuffle(tags.begin(), tags.end(), rng);
    for (FeatureTag t : tags) b.feature_tags.insert(t);
    const PlannerDecision da = rule_decide(a);
    const PlannerDecision db = rule_decide(b);
    EXPECT_EQ(da.method(), db.method());
    EXPECT_NE(da.phys() == nullptr, da.motion() == nullptr);
    const RuleScore s = rule_score(a.feature_tags);
    EXPECT_EQ(da.method(), s.phys > s.motion ? Method::kPhys : Method::kMotion);
  }
}

TEST(RuleDecide, MotionUsesBackgroundImageForPlacement) {
  ScenarioRequest r = scenario2();
  r.bg_image = Image(40, 40, 3, 90);
  r.fg_extent = Extent{6, 4};
  r.split_ratio = "1; 1";
  r.region_tags = {{"wall"}, {"water"}};
  const PlannerDecision d = rule_decide(r);
  ASSERT_EQ(d.method(), Method::kMotion);
  EXPECT_EQ(d.motion()->region, 1);
  EXPECT_EQ(d.motion()->placement, (Rect{17, 28, 6, 4}));
}

TEST(SelectRegion, SingleRegion) {
  const RegionChoice c = select_region(Image(20, 10, 3, 50), Extent{4, 4}, parse_split_ratio("1"));
  EXPECT_EQ(c.region, 0);
  EXPECT_EQ(c.region_rect, (Rect{0, 0, 20, 10}));
  EXPECT_EQ(c.placement, (Rect{8, 3, 4, 4}));
}

TEST(SelectRegion, OnlyRegionWithRoomWins) {
  // Left half is a fine checkerboard (no free pixels), right half is flat.
  Image bg(40, 20, 3, 100);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x)
      for (int c = 0; c < 3; ++c) bg.at(x, y, c) = ((x + y) % 2) ? 250 : 0;
  const RegionChoice c = select_region(bg, Extent{8, 8}, parse_split_ratio("(1,1)"));
  EXPECT_EQ(c.region, 1);
  EXPECT_LT(c.scores[0], 0.0);
}

TEST(SelectRegion, AffordanceTagsBreakEvenFreeArea) {
  const Image bg(40, 40, 3, 128);
  const std::vector<std::vector<std::string>> tags{{"sky", "wind"}, {"wall"}};
  const RegionChoice c = select_region(bg, Extent{5, 5}, parse_split_ratio("1; 1"), tags);
  EXPECT_EQ(c.region, 0);
  // Hand scores: 0.5 * 1 + 0.5 * 2/2 and 0.5 * 1 + 0.5 * 0/1.
  EXPECT_DOUBLE_EQ(c.scores[0], 1.0);
  EXPECT_DOUBLE_EQ(c.scores[1], 0.5);
}

TEST(SelectRegion, NothingFitsSuggestsScaling) {
  try {
    select_region(Image(10, 10, 3, 0), Extent{11, 2}, parse_split_ratio("1"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("reduce its scale"), std::string::npos);
  }
}

TEST(RegionTags, FromSubprompt) {
  EXPECT_EQ(region_tags_from_subprompt("The calm water surface, with a glass rim"),
            (std::vector<std::string>{"calm", "water", "surface", "glass", "rim"}));
}

TEST(FreePixels, FlatVersusEdges) {
  Image img(4, 1, 3, 10);
  for (int c = 0; c < 3; ++c) img.at(2, 0, c) = 200;
  const Mask m = free_pixels(img, 16);
  EXPECT_EQ(m.values, (std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(ComposeIntermediate, TransparentForegroundKeepsBackground) {
  Image bg(8, 6, 3);
  for (std::size_t i = 0; i < bg.pixels.size(); ++i) bg.pixels[i] = static_cast<std::uint8_t>(i * 7);
  const Image fg(3, 3, 4, 0);
  const Rect rect{2, 1, 3, 3};
  const IntermediateComposite out = compose_intermediate(bg, fg, rect);
  EXPECT_EQ(out.image, bg);
  EXPECT_EQ(out.mask.count(0), 9u);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) EXPECT_EQ(out.mask.at(x, y), rect.contains(x, y) ? 0 : 1);
}

TEST(ComposeIntermediate, WholeImageRectZeroesMask) {
  const Image bg(5, 4, 3, 30);
  const IntermediateComposite out = compose_intermediate(bg, Image(5, 4, 3, 200), Rect{0, 0, 5, 4});
  EXPECT_EQ(out.mask.count(1), 0u);
  EXPECT_EQ(out.image, Image(5, 4, 3, 200));
}

TEST(ComposeIntermediate, OpaqueTopLeftReplacesFourPixels) {
  Image bg(4, 4, 3, 10);
  const Image fg(2, 2, 4, 255);
  const IntermediateComposite out = compose_intermediate(bg, fg, Rect{0, 0, 2, 2});
  int changed = 0;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) changed += out.image.at(x, y, 0) != 10;
  EXPECT_EQ(changed, 4);
  EXPECT_EQ(out.image.at(1, 1, 2), 255);
  EXPECT_EQ(out.mask.count(0), 4u);
}

TEST(ComposeIntermediate, PixelsOutsideRectUntouched) {
  std::mt19937 rng(5);
  Image bg(16, 12, 3);
  Image fg(5, 7, 4);
  for (auto& p : bg.pixels) p = static_cast<std::uint8_t>(rng());
  for (auto& p : fg.pixels) p = static_cast<std::uint8_t>(rng());
  const Rect rect{3, 2, 9, 6};
  const IntermediateComposite out = compose_intermediate(bg, fg, rect);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x)
      if (!rect.contains(x, y))
        for (int c = 0; c < 3; ++c) ASSERT_EQ(out.image.at(x, y, c), bg.at(x, y, c));
}

TEST(ComposeIntermediate, OverflowReported) {
  try {
    compose_intermediate(Image(10, 10, 3), Image(2, 2, 3), Rect{8, 9, 4, 3});
    FAIL();
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("by 2 px horizontally and 2 px vertically"), std::string::npos) << msg;
  }
}

TEST(FormatDecision, KeysPerBranch) {
  EXPECT_EQ(format_decision(rule_decide(scenario1())),
            "method = InteractPhys\nrationale = rule engine: phys score 2, motion score 0\n"
            "segmentation_prompts = 2\nsegmentation_prompt.0 = rubber ball\n"
            "segmentation_prompt.1 = wood surface\n");
  const std::string motion = format_decision(rule_decide(scenario2()));
  EXPECT_NE(motion.find("split_ratio = 1,(1,1); 2\nregion = 0\n"), std::string::npos) << motion;
}

}  // namespace
}  // namespace interplay
