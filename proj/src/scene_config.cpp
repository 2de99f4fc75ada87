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

#include "interplay/scene_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "interplay/errors.hpp"
#include "interplay/raster.hpp"

namespace interplay {

namespace {

const std::set<std::string> kUnnamedKinds{"grid", "gravity", "sim", "scenario", "motion",
                                          "optimize"};
const std::set<std::string> kNamedKinds{"material", "object", "force"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_words(std::string_view s, std::string_view separators = " \t,") {
  std::vector<std::string> out;
  std::string word;
  for (char c : s) {
    if (separators.find(c) != std::string_view::npos) {
      if (!word.empty()) out.push_back(std::move(word));
      word.clear();
    } else {
      word.push_back(c);
    }
  }
  if (!word.empty()) out.push_back(std::move(word));
  return out;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

// Reads typed values out of one block, reporting errors against the entry.
class Fields {
 public:
  Fields(const ConfigDocument& doc, const ConfigBlock& block) : doc_(doc), block_(block) {}

  const ConfigEntry* get(std::string_view key) {
    const ConfigEntry* e = block_.find(key);
    if (e) used_.insert(std::string(key));
    return e;
  }

  [[noreturn]] void parse_fail(const ConfigEntry& e, const std::string& msg) const {
    throw ParseError(e.line ? doc_.source : std::string("--set"), e.line, e.column,
                     block_.label() + "." + e.key + ": " + msg);
  }
  [[noreturn]] void semantic_fail(std::string_view key, const std::string& msg) const {
    throw ConfigError("block '" + block_.label() + "', field '" + std::string(key) + "': " + msg);
  }

  std::vector<double> numbers(const ConfigEntry& e) const {
    std::vector<double> out;
    for (const std::string& w : split_words(e.value)) {
      double v = 0.0;
      const char* begin = w.data();
      if (*begin == '+') ++begin;
      const auto [ptr, ec] = std::from_chars(begin, w.data() + w.size(), v);
      if (ec != std::errc() || ptr != w.data() + w.size() || std::isnan(v)) {
        parse_fail(e, "'" + w + "' is not a number");
      }
      out.push_back(v);
    }
    return out;
  }

  double number(std::string_view key, double fallback) {
    const ConfigEntry* e = get(key);
    if (!e) return fallback;
    const auto v = numbers(*e);
    if (v.size() != 1) parse_fail(*e, "expected one number");
    return v[0];
  }
  double required_number(std::string_view key) {
    if (!block_.find(key)) semantic_fail(key, "missing");
    return number(key, 0.0);
  }
  int integer(std::string_view key, int fallback) {
    const ConfigEntry* e = get(key);
    if (!e) return fallback;
    const double v = number(key, 0.0);
    if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) {
      parse_fail(*e, "expected an integer");
    }
    return static_cast<int>(v);
  }
  Vec3 vec3(std::string_view key, const Vec3& fallback) {
    const ConfigEntry* e = get(key);
    if (!e) return fallback;
    const auto v = numbers(*e);
    if (v.size() != 3) parse_fail(*e, "expected three numbers");
    return Vec3(v[0], v[1], v[2]);
  }
  std::string text(std::string_view key, const std::string& fallback = {}) {
    const ConfigEntry* e = get(key);
    return e ? e->value : fallback;
  }
  std::filesystem::path existing_path(std::string_view key) {
    const ConfigEntry* e = get(key);
    if (!e) return {};
    std::filesystem::path p(e->value);
    if (p.is_relative()) p = doc_.base_dir / p;
    if (!std::filesystem::exists(p)) semantic_fail(key, "file not found: " + p.string());
    return p;
  }

  // Every key must have been read.
  void finish() const {
    for (const ConfigEntry& e : block_.entries) {
      if (!used_.contains(e.key)) {
        if (e.key == "lambda" || e.key == "mu") {
          semantic_fail(e.key, "Lame parameters are derived from E and nu and cannot be set");
        }
        semantic_fail(e.key, "unknown field");
      }
    }
  }

  const ConfigBlock& block() const { return block_; }
  const std::filesystem::path& base_dir() const { return doc_.base_dir; }

 private:
  const ConfigDocument& doc_;
  const ConfigBlock& block_;
  std::set<std::string> used_;
};

BoundaryKind parse_boundary(Fields& f, std::string_view key, BoundaryKind fallback) {
  const ConfigEntry* e = f.get(key);
  if (!e) return fallback;
  if (e->value == "free") return BoundaryKind::kFree;
  if (e->value == "sticky") return BoundaryKind::kSticky;
  if (e->value == "slip") return BoundaryKind::kSlip;
  f.parse_fail(*e, "expected free, sticky or slip");
}

void read_grid(Fields& f, SceneConfig& cfg) {
  if (const ConfigEntry* e = f.get("cells")) {
    const auto v = f.numbers(*e);
    if (v.size() != 1 && v.size() != 3) f.parse_fail(*e, "expected one or three integers");
    for (int a = 0; a < 3; ++a) {
      const double n = v[v.size() == 1 ? 0 : a];
      if (n != std::floor(n) || n < 2 * kInteriorMarginCells + 1 || n > 4096) {
        f.parse_fail(*e, "cell counts must be integers in [" +
                             std::to_string(2 * kInteriorMarginCells + 1) + ", 4096]");
      }
      cfg.grid.cells[a] = static_cast<int>(n);
    }
  }
  cfg.grid.spacing = f.number("spacing", 1.0 / cfg.grid.cells[0]);
  if (!(cfg.grid.spacing > 0.0)) f.semantic_fail("spacing", "must be > 0");
  static const char* faces[6] = {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max"};
  for (int i = 0; i < 6; ++i) {
    cfg.boundary.faces[i] = parse_boundary(f, faces[i], cfg.boundary.faces[i]);
  }
}

void read_material(Fields& f, SceneConfig& cfg) {
  const double E = f.required_number("E");
  const double nu = f.required_number("nu");
  const double viscosity = f.number("viscosity", 0.0);
  const double density = f.number("density", 1.0);
  f.finish();
  // Closed forms evaluated unguarded so validate_material reports every violation.
  const MaterialParams p = MaterialParams::unchecked(
      E, nu, E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu)), viscosity, density);
  const MaterialDiagnostic diag = validate_material(p);
  if (!diag.ok()) {
    throw ConfigError("block '" + f.block().label() + "': " + diag.to_string());
  }
  cfg.materials.emplace(f.block().name, MaterialParams::from_elastic(E, nu, viscosity, density));
}

void read_object(Fields& f, SceneConfig& cfg, PartLabel default_label) {
  ObjectSpec obj;
  obj.name = f.block().name;
  obj.cloud = f.existing_path("cloud");
  if (const ConfigEntry* e = f.get("shape")) {
    const auto words = split_words(e->value);
    if (words.empty()) f.parse_fail(*e, "expected 'sphere R' or 'box X Y Z'");
    ConfigEntry rest = *e;
    rest.value = e->value.substr(e->value.find(words[0]) + words[0].size());
    const auto dims = f.numbers(rest);
    if (words[0] == "sphere" && dims.size() == 1 && dims[0] > 0.0) {
      obj.radius = dims[0];
    } else if (words[0] == "box" && dims.size() == 3 && dims[0] > 0.0 && dims[1] > 0.0 &&
               dims[2] > 0.0) {
      obj.size = Vec3(dims[0], dims[1], dims[2]);
    } else {
      f.parse_fail(*e, "expected 'sphere R' or 'box X Y Z' with positive sizes");
    }
    obj.shape = words[0];
  }
  if (obj.cloud.empty() == obj.shape.empty()) {
    f.semantic_fail("cloud", "exactly one of 'cloud' and 'shape' is required");
  }
  obj.spacing = f.number("spacing", 0.0);
  if (obj.spacing < 0.0) f.semantic_fail("spacing", "must be >= 0");
  obj.material = f.text("material");
  obj.label = f.integer("label", default_label);
  if (obj.label < 0) f.semantic_fail("label", "must be >= 0");
  obj.placement.translation = f.vec3("translation", Vec3::Zero());
  obj.placement.uniform_scale = f.number("scale", 1.0);
  if (!(obj.placement.uniform_scale > 0.0)) f.semantic_fail("scale", "must be > 0");
  if (const ConfigEntry* e = f.get("rotation")) {
    const auto q = f.numbers(*e);
    if (q.size() != 4) f.parse_fail(*e, "expected a quaternion 'w x y z'");
    Eigen::Quaterniond rot(q[0], q[1], q[2], q[3]);
    if (!(rot.norm() > 0.0)) f.parse_fail(*e, "quaternion must be nonzero");
    obj.placement.rotation = rot.normalized();
  }
  obj.placement.drop_height = f.number("drop_height", 0.0);
  if (obj.placement.drop_height < 0.0) f.semantic_fail("drop_height", "must be >= 0");
  obj.labels_file = f.existing_path("labels");
  for (const ConfigEntry& e : f.block().entries) {
    if (e.key.rfind("part.", 0) != 0) continue;
    f.get(e.key);
    int label = 0;
    const std::string digits = e.key.substr(5);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), label);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || label < 0) {
      f.semantic_fail(e.key, "part keys look like part.<label>");
    }
    obj.part_materials[label] = e.value;
  }
  f.finish();
  if (obj.labels_file.empty()) {
    if (!obj.part_materials.empty()) f.semantic_fail("part", "part materials need a labels file");
    if (obj.material.empty()) f.semantic_fail("material", "missing");
    obj.part_materials[obj.label] = obj.material;
  } else if (obj.part_materials.empty()) {
    f.semantic_fail("part", "a labels file needs part.<label> = material entries");
  }
  for (const auto& [label, name] : obj.part_materials) {
    if (!cfg.materials.contains(name)) f.semantic_fail("material", "unknown material '" + name + "'");
  }
  cfg.objects.push_back(std::move(obj));
}

void read_force(Fields& f, SceneConfig& cfg) {
  ForceField field;
  const std::string kind = f.text("kind", "uniform_wind");
  if (kind == "uniform_wind") {
    field.kind = ForceKind::kUniformWind;
  } else if (kind == "region_impulse") {
    field.kind = ForceKind::kRegionImpulse;
  } else {
    f.semantic_fail("kind", "expected uniform_wind or region_impulse");
  }
  field.vector = f.vec3("vector", Vec3::Zero());
  if (const ConfigEntry* e = f.get("region"); e && trim(e->value) != "whole") {
    const auto v = f.numbers(*e);
    if (v.size() != 6) f.parse_fail(*e, "expected 'whole' or six numbers (lower, upper)");
    Box box{Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
    if (!(box.lower.array() <= box.upper.array()).all()) {
      f.semantic_fail("region", "lower corner exceeds upper corner");
    }
    const Vec3 extent = cfg.grid.extent();
    if ((box.upper.array() < 0.0).any() || (box.lower.array() > extent.array()).any()) {
      f.semantic_fail("region", "does not intersect the grid");
    }
    field.region = box;
  }
  field.t_start = 0.0;
  field.t_end = std::numeric_limits<double>::infinity();
  if (const ConfigEntry* e = f.get("window")) {
    const auto v = f.numbers(*e);
    if (v.size() != 2) f.parse_fail(*e, "expected 't_start t_end'");
    field.t_start = v[0];
    field.t_end = v[1];
  }
  if (field.t_start > field.t_end) f.semantic_fail("window", "t_start exceeds t_end");
  f.finish();
  cfg.forces.push_back(field);
}

void read_sim(Fields& f, SceneConfig& cfg) {
  cfg.sim.dt = f.number("dt", cfg.sim.dt);
  cfg.sim.steps = f.integer("steps", cfg.sim.steps);
  cfg.sim.frame_stride = f.integer("frame_stride", cfg.sim.frame_stride);
  cfg.sim.threads = f.integer("threads", cfg.sim.threads);
  f.finish();
  if (!(cfg.sim.dt > 0.0)) f.semantic_fail("dt", "must be > 0");
  if (cfg.sim.steps < 0) f.semantic_fail("steps", "must be >= 0");
  if (cfg.sim.frame_stride < 1) f.semantic_fail("frame_stride", "must be >= 1");
}

void read_scenario(Fields& f, SceneConfig& cfg) {
  ScenarioSpec s;
  s.foreground = f.text("foreground");
  s.background = f.text("background");
  if (const ConfigEntry* e = f.get("tags")) {
    for (const std::string& w : split_words(e->value)) {
      const auto tag = parse_feature_tag(w);
      if (!tag) f.parse_fail(*e, "unknown feature tag '" + w + "'");
      s.tags.insert(*tag);
    }
  }
  s.background_image = f.existing_path("background_image");
  s.foreground_image = f.existing_path("foreground_image");
  s.foreground_scale = f.number("foreground_scale", 1.0);
  if (!(s.foreground_scale > 0.0)) f.semantic_fail("foreground_scale", "must be > 0");
  s.split_ratio = f.text("split_ratio", "1");
  if (const ConfigEntry* e = f.get("split_ratio")) {
    try {
      parse_split_ratio(s.split_ratio);
    } catch (const ParseError& err) {
      f.parse_fail(*e, err.what());
    }
  }
  if (const ConfigEntry* e = f.get("region_tags")) {
    for (const std::string& group : split_words(e->value, "|")) {
      s.region_tags.push_back(split_words(group));
    }
  }
  f.finish();
  if (s.foreground.empty() && s.background.empty() && s.tags.empty()) {
    f.semantic_fail("tags", "a scenario needs descriptions or feature tags");
  }
  cfg.scenario = std::move(s);
}

void read_motion(Fields& f, SceneConfig& cfg) {
  cfg.motion.frames = f.integer("frames", cfg.motion.frames);
  cfg.motion.steps = f.integer("steps", cfg.motion.steps);
  cfg.motion.denoiser = f.text("denoiser", cfg.motion.denoiser);
  cfg.motion.schedule_end = f.number("schedule_end", cfg.motion.schedule_end);
  cfg.motion.threads = f.integer("threads", cfg.motion.threads);
  f.finish();
  if (cfg.motion.frames < 1) f.semantic_fail("frames", "must be >= 1");
  if (cfg.motion.steps < 1) f.semantic_fail("steps", "must be >= 1");
  if (!(cfg.motion.schedule_end > 0.0 && cfg.motion.schedule_end < 1.0)) {
    f.semantic_fail("schedule_end", "must lie in (0, 1)");
  }
}

void read_optimize(Fields& f, SceneConfig& cfg) {
  OptimizeSettings& o = cfg.optimize;
  if (const ConfigEntry* e = f.get("reference")) {
    o.reference = e->value;
    if (o.reference.is_relative()) o.reference = f.base_dir() / o.reference;
  }
  if (const ConfigEntry* e = f.get("parts")) {
    o.parts.clear();
    for (double v : f.numbers(*e)) {
      if (v != std::floor(v) || v < 0) f.parse_fail(*e, "part labels are nonnegative integers");
      o.parts.push_back(static_cast<PartLabel>(v));
    }
  }
  if (const ConfigEntry* e = f.get("free")) {
    o.free = FreeCoordinates{false, false, false};
    for (const std::string& w : split_words(e->value)) {
      if (w == "E") {
        o.free.young_modulus = true;
      } else if (w == "nu") {
        o.free.poisson_ratio = true;
      } else if (w == "viscosity") {
        o.free.viscosity = true;
      } else {
        f.parse_fail(*e, "free coordinates are E, nu and viscosity");
      }
    }
  }
  o.iterations = f.integer("iterations", o.iterations);
  o.step_size = f.number("step_size", o.step_size);
  o.log_eps = f.number("log_eps", o.log_eps);
  o.poisson_eps = f.number("poisson_eps", o.poisson_eps);
  o.threads = f.integer("threads", o.threads);
  f.finish();
}

}  // namespace

const ConfigEntry* ConfigBlock::find(std::string_view key) const {
  for (const ConfigEntry& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

ConfigDocument parse_config_text(std::string_view text, const std::string& source,
                                 const std::filesystem::path& base_dir) {
  ConfigDocument doc;
  doc.source = source;
  doc.base_dir = base_dir;
  ConfigBlock* open = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string_view body = trim(line);
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t col = static_cast<std::size_t>(body.data() - text.data()) - line_start + 1;

    if (open == nullptr) {
      if (body.back() != '{') throw ParseError(source, line_no, col, "expected 'kind [name] {'");
      const auto words = split_words(body.substr(0, body.size() - 1), " \t");
      if (words.empty() || words.size() > 2) {
        throw ParseError(source, line_no, col, "expected 'kind [name] {'");
      }
      const std::string& kind = words[0];
      const bool named = kNamedKinds.contains(kind);
      if (!named && !kUnnamedKinds.contains(kind)) {
        throw ParseError(source, line_no, col, "unknown block kind '" + kind + "'");
      }
      if (named != (words.size() == 2)) {
        throw ParseError(source, line_no, col,
                         named ? "block '" + kind + "' needs a name" : "block '" + kind + "' takes no name");
      }
      if (named && !valid_identifier(words[1])) {
        throw ParseError(source, line_no, col, "invalid block name '" + words[1] + "'");
      }
      const std::string name = named ? words[1] : std::string();
      for (const ConfigBlock& b : doc.blocks) {
        if (b.kind == kind && b.name == name) {
          throw ParseError(source, line_no, col,
                           "duplicate block '" + b.label() + "' (first at line " +
                               std::to_string(b.line) + ")");
        }
      }
      doc.blocks.push_back(ConfigBlock{kind, name, line_no, {}});
      open = &doc.blocks.back();
    } else if (body == "}") {
      open = nullptr;
    } else {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError(source, line_no, col, "expected 'key = value'");
      const std::string key(trim(body.substr(0, eq)));
      if (!valid_identifier(key)) throw ParseError(source, line_no, col, "invalid key '" + key + "'");
      if (open->find(key)) throw ParseError(source, line_no, col, "duplicate key '" + key + "'");
      const std::string_view raw = body.substr(eq + 1);
      const std::string_view value = trim(raw);
      if (value.empty()) throw ParseError(source, line_no, col + eq + 1, "missing value");
      const std::size_t vcol = static_cast<std::size_t>(value.data() - text.data()) - line_start + 1;
      open->entries.push_back(ConfigEntry{key, std::string(value), line_no, vcol});
    }
    if (end == text.size()) break;
  }
  if (open != nullptr) {
    throw ParseError(source, open->line, 1, "block '" + open->label() + "' is not closed");
  }
  return doc;
}

ConfigDocument parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string(), path.parent_path());
}

void apply_override(ConfigDocument& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string path(trim(assignment.substr(0, eq)));
  const std::string value(trim(assignment.substr(eq + 1)));
  const auto dot = path.find('.');
  if (dot == std::string::npos || value.empty()) {
    throw ConfigError("override '" + std::string(assignment) + "' must look like block.key=value");
  }
  const std::string kind = path.substr(0, dot);
  std::string name;
  std::string key = path.substr(dot + 1);
  if (kNamedKinds.contains(kind)) {
    const auto dot2 = key.find('.');
    if (dot2 == std::string::npos) {
      throw ConfigError("override '" + path + "' must look like " + kind + ".<name>.key=value");
    }
    name = key.substr(0, dot2);
    key = key.substr(dot2 + 1);
  } else if (!kUnnamedKinds.contains(kind)) {
    throw ConfigError("override '" + path + "': unknown block kind '" + kind + "'");
  }
  ConfigBlock* target = nullptr;
  for (ConfigBlock& b : doc.blocks) {
    if (b.kind == kind && b.name == name) target = &b;
  }
  if (target == nullptr) {
    if (!name.empty()) throw ConfigError("override '" + path + "': no block '" + kind + " " + name + "'");
    doc.blocks.push_back(ConfigBlock{kind, name, 0, {}});
    target = &doc.blocks.back();
  }
  for (ConfigEntry& e : target->entries) {
    if (e.key == key) {
      e = ConfigEntry{key, value, 0, 0};
      return;
    }
  }
  target->entries.push_back(ConfigEntry{key, value, 0, 0});
}

SceneConfig interpret_config(const ConfigDocument& doc) {
  SceneConfig cfg;
  cfg.source = doc.source;
  // Grid first: forces and objects depend on it; materials before objects.
  static const char* order[] = {"grid", "gravity", "material", "object", "force",
                                "sim",  "scenario", "motion", "optimize"};
  bool has_grid = false;
  PartLabel next_label = 0;
  for (const char* kind : order) {
    for (const ConfigBlock& block : doc.blocks) {
      if (block.kind != kind) continue;
      Fields f(doc, block);
      const std::string k = block.kind;
      if (k == "grid") {
        read_grid(f, cfg);
        f.finish();
        has_grid = true;
      } else if (k == "gravity") {
        cfg.gravity = f.vec3("vector", cfg.gravity);
        f.finish();
      } else if (k == "material") {
        read_material(f, cfg);
      } else if (k == "object") {
        read_object(f, cfg, next_label);
        next_label = cfg.objects.back().part_materials.rbegin()->first + 1;
      } else if (k == "force") {
        read_force(f, cfg);
      } else if (k == "sim") {
        read_sim(f, cfg);
      } else if (k == "scenario") {
        read_scenario(f, cfg);
      } else if (k == "motion") {
        read_motion(f, cfg);
      } else if (k == "optimize") {
        read_optimize(f, cfg);
      }
    }
  }
  if (!has_grid && !cfg.objects.empty()) {
    throw ConfigError("config " + doc.source + " has objects but no grid block");
  }
  return cfg;
}

SceneConfig load_scene_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides) {
  ConfigDocument doc = parse_config_file(path);
  for (const std::string& o : overrides) apply_override(doc, o);
  return interpret_config(doc);
}

Scene build_scene(const SceneConfig& config) {
  Scene scene;
  scene.grid = config.grid;
  scene.boundary = config.boundary;
  scene.gravity = config.gravity;
  scene.external_forces = config.forces;
  scene.dt = config.sim.dt;
  for (const ObjectSpec& obj : config.objects) {
    std::vector<Vec3> positions;
    if (!obj.cloud.empty()) {
      positions = read_cloud_positions(obj.cloud);
    } else {
      const double spacing = obj.spacing > 0.0 ? obj.spacing : 0.5 * config.grid.spacing;
      positions = obj.shape == "sphere" ? sample_sphere(Vec3::Zero(), obj.radius, spacing)
                                        : sample_box(-0.5 * obj.size, 0.5 * obj.size, spacing);
    }
    if (positions.empty()) throw ConfigError("object '" + obj.name + "' has no particles");
    ParticleSet cloud = make_cloud(positions, obj.label);
    if (!obj.labels_file.empty()) {
      cloud = apply_segmentation_labels(cloud, obj.labels_file).particles;
    }
    PartMaterialMap parts;
    for (const auto& [label, name] : obj.part_materials) {
      parts = assign_part_material(parts, label, config.materials.at(name));
    }
    try {
      scene = compose_scene(scene, cloud, obj.placement, parts);
    } catch (const Error& e) {
      throw ConfigError("object '" + obj.name + "': " + e.what());
    }
  }
  validate_scene(scene);
  return scene;
}

ScenarioRequest build_request(const SceneConfig& config) {
  if (!config.scenario) throw ConfigError("config " + config.source + " has no scenario block");
  const ScenarioSpec& s = *config.scenario;
  ScenarioRequest req;
  req.fg_description = s.foreground;
  req.bg_description = s.background;
  req.feature_tags = s.tags;
  req.split_ratio = s.split_ratio;
  req.region_tags = s.region_tags;
  if (!s.background_image.empty()) req.bg_image = read_png(s.background_image);
  if (!s.foreground_image.empty()) {
    req.fg_image = read_png(s.foreground_image);
    req.fg_extent = Extent{
        std::max(1, static_cast<int>(std::lround(req.fg_image->width * s.foreground_scale))),
        std::max(1, static_cast<int>(std::lround(req.fg_image->height * s.foreground_scale)))};
  }
  return req;
}

}  // namespace interplay
