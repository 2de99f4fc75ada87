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

#include "interplay/errors.hpp"
#include "interplay/scene_config.hpp"
#include "test_support.hpp"

namespace interplay {
namespace {

using test::TempDir;
using test::write_file;

const char* kMinimal =
    "# minimal scene\n"
    "grid {\n"
    "  cells = 32\n"
    "}\n"
    "material soft {\n"
    "  E = 1e3\n"
    "  nu = 0.25\n"
    "  density = 10\n"
    "}\n"
    "object cube {\n"
    "  cloud = cube.csv\n"
    "  material = soft\n"
    "  translation = 0.3 0.3 0.3\n"
    "  scale = 0.2\n"
    "}\n"
    "sim {\n"
    "  dt = 0.001\n"
    "  steps = 10\n"
    "  frame_stride = 5\n"
    "}\n";

const char* kCube = "x,y,z\n0,0,0\n1,0,0\n0,1,0\n1,1,0\n0,0,1\n1,0,1\n0,1,1\n1,1,1\n";

TEST(LoadSceneConfig, MinimalConfigLoads) {
  TempDir dir("cfg");
  write_file(dir / "cube.csv", kCube);
  write_file(dir / "scene.cfg", kMinimal);
  const SceneConfig cfg = load_scene_config(dir / "scene.cfg");
  EXPECT_EQ(cfg.grid.cells[1], 32);
  EXPECT_DOUBLE_EQ(cfg.grid.spacing, 1.0 / 32.0);
  EXPECT_EQ(cfg.sim.steps, 10);
  ASSERT_EQ(cfg.objects.size(), 1u);
  EXPECT_EQ(cfg.objects[0].cloud, dir / "cube.csv");
  const MaterialParams& soft = cfg.materials.at("soft");
  EXPECT_DOUBLE_EQ(soft.lame_mu(), 1e3 / 2.5);

  const Scene scene = build_scene(cfg);
  ASSERT_EQ(scene.particles.size(), 8u);
  EXPECT_EQ(scene.particles[7].position, Vec3(0.5, 0.5, 0.5));
  EXPECT_EQ(scene.materials.size(), 1u);
}

TEST(LoadSceneConfig, MissingCloudNamesPath) {
  TempDir dir("cfg");
  write_file(dir / "scene.cfg", kMinimal);
  try {
    load_scene_config(dir / "scene.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find((dir / "cube.csv").string()), std::string::npos) << msg;
    EXPECT_NE(msg.find("object cube"), std::string::npos) << msg;
  }
}

TEST(LoadSceneConfig, OverrideSupersedesFile) {
  TempDir dir("cfg");
  write_file(dir / "cube.csv", kCube);
  write_file(dir / "scene.cfg", kMinimal);
  const SceneConfig cfg = load_scene_config(dir / "scene.cfg", {"sim.dt=0.0005"});
  EXPECT_EQ(cfg.sim.dt, 0.0005);
  const SceneConfig named = load_scene_config(dir / "scene.cfg", {"material.soft.E=2e3"});
  EXPECT_EQ(named.materials.at("soft").young_modulus(), 2e3);
  const SceneConfig created = load_scene_config(dir / "scene.cfg", {"gravity.vector=0 -1 0"});
  EXPECT_EQ(created.gravity, Vec3(0, -1, 0));
  EXPECT_THROW(load_scene_config(dir / "scene.cfg", {"material.hard.E=1"}), ConfigError);
  EXPECT_THROW(load_scene_config(dir / "scene.cfg", {"sim.dt"}), ConfigError);
  EXPECT_THROW(load_scene_config(dir / "scene.cfg", {"bogus.x=1"}), ConfigError);
}

TEST(ParseConfigText, SyntaxErrorsCarryLineAndColumn) {
  try {
    parse_config_text("grid {\n  cells 32\n}\n", "t.cfg");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  try {
    parse_config_text("grid {\n}\nplanet x {\n}\n", "t.cfg");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("planet"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("sim {\n dt = 1\n dt = 2\n}\n", "t.cfg"), ParseError);
  EXPECT_THROW(parse_config_text("sim {\n dt = 1\n", "t.cfg"), ParseError);
  EXPECT_THROW(parse_config_text("sim {\n}\nsim {\n}\n", "t.cfg"), ParseError);
  EXPECT_THROW(parse_config_text("material {\n}\n", "t.cfg"), ParseError);
}

TEST(ParseConfigText, CommentsAndValuesToEndOfLine) {
  const ConfigDocument doc =
      parse_config_text("# top\nscenario {\n  foreground = a red  ball # trailing\n}\n", "t.cfg");
  ASSERT_EQ(doc.blocks.size(), 1u);
  const ConfigEntry* e = doc.blocks[0].find("foreground");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->value, "a red  ball");
  EXPECT_EQ(e->line, 3u);
}

TEST(InterpretConfig, BadValueReportsPosition) {
  try {
    interpret_config(parse_config_text("sim {\n  dt = fast\n}\n", "t.cfg"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 8u);
  }
}

TEST(InterpretConfig, SemanticErrorsNameBlockAndField) {
  try {
    interpret_config(parse_config_text("material m {\n  E = 1\n  nu = 0.7\n  density = 1\n}\n", "t.cfg"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("material m"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("poisson_ratio"), std::string::npos) << e.what();
  }
  try {
    interpret_config(parse_config_text("material m {\n  E = 1\n  nu = 0.3\n  density = 1\n  lambda = 3\n}\n", "t.cfg"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda"), std::string::npos) << e.what();
  }
  try {
    interpret_config(parse_config_text("sim {\n  speed = 3\n}\n", "t.cfg"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("field 'speed'"), std::string::npos) << e.what();
  }
}

TEST(InterpretConfig, ScenarioBlock) {
  const SceneConfig cfg = interpret_config(parse_config_text(
      "scenario {\n  foreground = ball\n  background = floor\n  tags = wind, rigid\n"
      "  split_ratio = 1; 1\n  region_tags = sky blue | stone wall\n}\n",
      "t.cfg"));
  ASSERT_TRUE(cfg.scenario.has_value());
  EXPECT_EQ(cfg.scenario->tags, (std::set<FeatureTag>{FeatureTag::kWind, FeatureTag::kRigid}));
  ASSERT_EQ(cfg.scenario->region_tags.size(), 2u);
  EXPECT_EQ(cfg.scenario->region_tags[1], (std::vector<std::string>{"stone", "wall"}));
  const ScenarioRequest r = build_request(cfg);
  EXPECT_EQ(r.fg_description, "ball");
  EXPECT_EQ(r.split_ratio, "1; 1");
  EXPECT_THROW(interpret_config(parse_config_text("scenario {\n  tags = jelly\n}\n", "t.cfg")),
               ParseError);
}

TEST(InterpretConfig, ForcesAndBoundaries) {
  const SceneConfig cfg = interpret_config(parse_config_text(
      "grid {\n  cells = 16 32 16\n  spacing = 0.05\n  x_min = sticky\n  y_min = slip\n}\n"
      "force breeze {\n  kind = uniform_wind\n  vector = 1 0 0\n  window = 0 2\n}\n",
      "t.cfg"));
  EXPECT_EQ(cfg.grid.cells, (std::array<int, 3>{16, 32, 16}));
  EXPECT_EQ(cfg.boundary.faces[0], BoundaryKind::kSticky);
  EXPECT_EQ(cfg.boundary.faces[2], BoundaryKind::kSlip);
  ASSERT_EQ(cfg.forces.size(), 1u);
  EXPECT_EQ(cfg.forces[0].vector, Vec3(1, 0, 0));
  EXPECT_EQ(cfg.forces[0].t_end, 2.0);
  EXPECT_FALSE(cfg.forces[0].region.has_value());
}

TEST(BuildScene, FixtureConfigsLoad) {
  const std::filesystem::path configs(INTERPLAY_CONFIG_DIR);
  const SceneConfig ball = load_scene_config(configs / "rubber_ball.cfg");
  const Scene scene = build_scene(ball);
  EXPECT_GT(scene.particles.size(), 500u);
  EXPECT_EQ(scene.boundary.faces[2], BoundaryKind::kSticky);
  const SceneConfig wine = load_scene_config(configs / "wine_pour.cfg");
  const ScenarioRequest req = build_request(wine);
  ASSERT_TRUE(req.bg_image.has_value());
  ASSERT_TRUE(req.fg_image.has_value());
  EXPECT_EQ(req.fg_image->channels, 4);
}

}  // namespace
}  // namespace interplay
