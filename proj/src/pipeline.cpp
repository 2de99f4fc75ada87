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

#include "interplay/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "interplay/errors.hpp"
#include "interplay/inpaint.hpp"
#include "interplay/optimize.hpp"
#include "interplay/planner.hpp"
#include "interplay/planner_service.hpp"
#include "interplay/raster.hpp"
#include "interplay/scene_config.hpp"
#include "interplay/simulation.hpp"
#include "interplay/trajectory_io.hpp"

namespace interplay {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

class Run {
 public:
  Run(const PipelineConfig& config, Manifest& manifest) : config_(config), manifest_(manifest) {}

  template <typename Fn>
  auto stage(const std::string& name, Fn&& fn) {
    current_ = name;
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish(name, start);
    } else {
      auto value = fn();
      finish(name, start);
      return value;
    }
  }

  void artifact(const fs::path& path) {
    artifacts_.push_back(fs::relative(path, config_.out_dir).generic_string());
  }

  const std::string& current() const { return current_; }
  const std::vector<std::string>& artifacts() const { return artifacts_; }
  const std::vector<std::pair<std::string, double>>& timings() const { return timings_; }

 private:
  void finish(const std::string& name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    manifest_.set("stage." + name, "ok");
    timings_.emplace_back(name, elapsed.count());
  }

  const PipelineConfig& config_;
  Manifest& manifest_;
  std::string current_ = "setup";
  std::vector<std::string> artifacts_;
  std::vector<std::pair<std::string, double>> timings_;
};

void record_decision(Manifest& m, const PlannerDecision& d) {
  m.set("decision.method", std::string(to_string(d.method())));
  m.set("decision.rationale", d.rationale);
  if (const PhysBranch* phys = d.phys()) {
    for (std::size_t i = 0; i < phys->segmentation_prompts.size(); ++i) {
      m.set("decision.segmentation_prompt." + std::to_string(i), phys->segmentation_prompts[i]);
    }
  } else if (const MotionBranch* motion = d.motion()) {
    m.set("decision.split_ratio", motion->split_ratio);
    m.set("decision.region", std::to_string(motion->region));
    if (motion->placement) m.set("decision.placement", to_string(*motion->placement));
  }
}

PlannerDecision plan_stage(const SceneConfig& scene_config, const PipelineConfig& config,
                           ChatBackend* backend, Manifest& m, ScenarioRequest& request) {
  request = build_request(scene_config);
  std::unique_ptr<HttpChatBackend> http;
  ChatBackend* service = nullptr;
  if (!config.offline) {
    if (backend != nullptr) {
      service = backend;
    } else if (auto env = HttpChatConfig::from_env()) {
      http = std::make_unique<HttpChatBackend>(*env);
      service = http.get();
    }
  }
  m.set("planner.backend", service ? "service" : "rules");
  const PlannerDecision decision = service ? service_decide(request, *service) : rule_decide(request);
  record_decision(m, decision);
  return decision;
}

Rect placement_rect(const PlannerDecision& decision, const ScenarioRequest& request) {
  const MotionBranch& motion = *decision.motion();
  if (motion.placement) return *motion.placement;
  if (!request.bg_image || !request.fg_extent) {
    throw ConfigError("motion branch needs scenario.background_image and scenario.foreground_image");
  }
  const std::vector<Rect> regions = split_regions(parse_split_ratio(motion.split_ratio),
                                                  request.bg_image->width, request.bg_image->height);
  if (motion.region < 0 || static_cast<std::size_t>(motion.region) >= regions.size()) {
    throw ConfigError("planner chose region " + std::to_string(motion.region) + " of " +
                      std::to_string(regions.size()));
  }
  const Rect& r = regions[static_cast<std::size_t>(motion.region)];
  const Extent fg = *request.fg_extent;
  if (fg.width > r.width || fg.height > r.height) {
    throw ConfigError("foreground does not fit region " + std::to_string(motion.region) +
                      "; reduce scenario.foreground_scale");
  }
  return Rect{r.x + (r.width - fg.width) / 2, r.y + (r.height - fg.height) / 2, fg.width,
              fg.height};
}

void simulate_stage(const SceneConfig& sc, const PipelineConfig& config, Manifest& m, Run& run) {
  const Scene scene = build_scene(sc);
  m.set("simulate.particles", std::to_string(scene.particles.size()));
  m.set("simulate.parts", std::to_string(scene.materials.size()));
  m.set("simulate.dt", num(sc.sim.dt));
  m.set("simulate.steps", std::to_string(sc.sim.steps));
  m.set("simulate.frame_stride", std::to_string(sc.sim.frame_stride));
  const SimulationResult result =
      simulate(scene, sc.sim.steps, sc.sim.dt, sc.sim.frame_stride, ParallelOptions{sc.sim.threads});
  m.set("simulate.steps_completed", std::to_string(result.steps_completed));
  for (const fs::path& p : export_trajectory(config.out_dir / "trajectory", result.trajectory)) {
    run.artifact(p);
  }
  if (!result.ok()) throw Error("simulation failed: " + *result.failure);
}

void inpaint_stage(const Image& composite, const Mask& mask, const SceneConfig& sc,
                   const PipelineConfig& config, Manifest& m, Run& run) {
  if (mask.width != composite.width || mask.height != composite.height) {
    throw ShapeError("mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                     ", composite is " + std::to_string(composite.width) + "x" +
                     std::to_string(composite.height));
  }
  const int frames = config.frames.value_or(sc.motion.frames);
  const int steps = config.steps.value_or(sc.motion.steps);
  const std::string denoiser_name = config.denoiser.value_or(sc.motion.denoiser);
  if (frames < 1 || steps < 1) throw ConfigError("frames and steps must be >= 1");
  const auto denoiser = make_denoiser(denoiser_name);
  const NoiseSchedule schedule = NoiseSchedule::linear(steps, sc.motion.schedule_end);
  const ExtendedMask extended = extend_mask(mask, static_cast<std::size_t>(frames));
  Conditioning cond;
  if (sc.scenario) cond.payload = sc.scenario->foreground;
  m.set("inpaint.denoiser", denoiser->descriptor());
  m.set("inpaint.frames", std::to_string(frames));
  m.set("inpaint.steps", std::to_string(steps));
  m.set("inpaint.schedule", "linear 1 -> " + num(sc.motion.schedule_end));

  const LatentVideo video = inpaint(image_to_latent(composite), extended, *denoiser, cond, schedule,
                                    static_cast<std::size_t>(frames), config.seed,
                                    InpaintOptions{sc.motion.threads});
  const FrameSelection selection = select_frame(video, extended);
  m.set("inpaint.selected_frame", std::to_string(selection.index));

  const fs::path dir = config.out_dir / "frames";
  fs::create_directories(dir);
  for (std::size_t f = 0; f < video.frame_count(); ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03zu.png", f);
    write_png(dir / name, latent_frame_to_image(video, f));
    run.artifact(dir / name);
  }
  std::string report = "frames = " + std::to_string(frames) + "\n";
  report += "steps = " + std::to_string(steps) + "\n";
  report += "denoiser = " + denoiser->descriptor() + "\n";
  report += "seed = " + std::to_string(config.seed) + "\n";
  report += "selected_frame = " + std::to_string(selection.index) + "\n";
  for (std::size_t f = 0; f < selection.scores.size(); ++f) {
    report += "score." + std::to_string(f) + " = " + num(selection.scores[f]) + "\n";
  }
  write_text(config.out_dir / "selection.txt", report);
  run.artifact(config.out_dir / "selection.txt");
  write_png(config.out_dir / "selected.png", latent_frame_to_image(video, selection.index));
  run.artifact(config.out_dir / "selected.png");
}

std::pair<Image, Mask> compose_stage(const PlannerDecision& decision, const ScenarioRequest& request,
                                     const PipelineConfig& config, Manifest& m, Run& run) {
  if (!request.bg_image || !request.fg_image) {
    throw ConfigError("motion branch needs scenario.background_image and scenario.foreground_image");
  }
  const Rect rect = placement_rect(decision, request);
  m.set("compose.rect", to_string(rect));
  IntermediateComposite comp = compose_intermediate(*request.bg_image, *request.fg_image, rect);
  write_png(config.out_dir / "composite.png", comp.image);
  write_mask_png(config.out_dir / "mask.png", comp.mask);
  run.artifact(config.out_dir / "composite.png");
  run.artifact(config.out_dir / "mask.png");
  return {std::move(comp.image), std::move(comp.mask)};
}

void optimize_stage(const SceneConfig& sc, const PipelineConfig& config, Manifest& m, Run& run) {
  const Scene scene = build_scene(sc);
  const fs::path reference = config.reference.empty() ? sc.optimize.reference : config.reference;
  if (reference.empty()) throw ConfigError("optimize needs a reference trajectory directory");
  Trajectory ref = load_trajectory(reference);
  std::vector<PartLabel> parts = sc.optimize.parts;
  if (config.part) parts = {*config.part};
  const OptimizableParams init = OptimizableParams::from_scene(scene, parts, sc.optimize.free);

  OptimizeConfig oc;
  oc.iterations = config.iterations.value_or(sc.optimize.iterations);
  oc.step_size = config.step_size.value_or(sc.optimize.step_size);
  oc.log_eps = sc.optimize.log_eps;
  oc.poisson_eps = sc.optimize.poisson_eps;
  oc.sim_steps = sc.sim.steps;
  oc.dt = sc.sim.dt;
  oc.frame_stride = sc.sim.frame_stride;
  oc.threads = sc.optimize.threads;
  m.set("optimize.reference_frames", std::to_string(ref.frames.size()));
  m.set("optimize.iterations", std::to_string(oc.iterations));
  m.set("optimize.step_size", num(oc.step_size));

  const GuidanceObjective objective = reference_trajectory_objective(std::move(ref));
  const OptimizeResult result = optimize_materials(scene, objective, init, oc);
  m.set("optimize.initial_loss", num(result.loss_history.front()));
  m.set("optimize.final_loss", num(result.loss_history.back()));
  for (const fs::path& p :
       write_optimize_result(config.out_dir / "optimize", result, scene, objective.descriptor)) {
    run.artifact(p);
  }
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kPlan: return "plan";
    case Mode::kSimulate: return "simulate";
    case Mode::kOptimize: return "optimize";
    case Mode::kInpaint: return "inpaint";
    case Mode::kPipeline: return "pipeline";
  }
  return "unknown";
}

void PipelineConfig::validate() const {
  const bool needs_config = mode != Mode::kInpaint || composite.empty() || mask.empty();
  if (needs_config && config_path.empty()) {
    throw ConfigError(std::string(to_string(mode)) + " needs a scene config");
  }
  if (!config_path.empty() && !fs::is_regular_file(config_path)) {
    throw ConfigError("config not found: " + config_path.string());
  }
  for (const fs::path& p : {composite, mask, reference}) {
    if (!p.empty() && !fs::exists(p)) throw ConfigError("input not found: " + p.string());
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw ConfigError("cannot create output directory " + out_dir.string());
  }
}

void Manifest::set(const std::string& key, const std::string& value) {
  std::string clean = value;
  for (char& c : clean) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = clean;
      return;
    }
  }
  entries_.emplace_back(key, clean);
}

const std::string* Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Manifest::text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void Manifest::write(const fs::path& path) const { write_text(path, text()); }

std::string strip_timing(const std::string& manifest_text) {
  std::istringstream in(manifest_text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.rfind("timing.", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& config, ChatBackend* backend) {
  PipelineResult result;
  Manifest& m = result.manifest;
  m.set("manifest_version", "1");
  m.set("tool_version", kVersion);
  m.set("mode", std::string(to_string(config.mode)));
  m.set("config", config.config_path.generic_string());
  m.set("seed", std::to_string(config.seed));
  std::string overrides;
  for (const std::string& o : config.overrides) overrides += (overrides.empty() ? "" : "; ") + o;
  m.set("overrides", overrides);

  Run run(config, m);
  const auto started = std::chrono::system_clock::now();
  const auto start = std::chrono::steady_clock::now();
  bool out_ok = false;
  try {
    run.stage("setup", [&] { config.validate(); });
    out_ok = true;
    SceneConfig sc;
    if (!config.config_path.empty()) {
      sc = run.stage("load_config", [&] { return load_scene_config(config.config_path, config.overrides); });
    }
    switch (config.mode) {
      case Mode::kPlan: {
        ScenarioRequest request;
        const PlannerDecision decision =
            run.stage("plan", [&] { return plan_stage(sc, config, backend, m, request); });
        write_text(config.out_dir / "plan.txt", format_decision(decision));
        run.artifact(config.out_dir / "plan.txt");
        if (decision.motion() && request.bg_image && request.fg_image) {
          run.stage("compose", [&] { compose_stage(decision, request, config, m, run); });
        }
        break;
      }
      case Mode::kSimulate:
        run.stage("simulate", [&] { simulate_stage(sc, config, m, run); });
        break;
      case Mode::kOptimize:
        run.stage("optimize", [&] { optimize_stage(sc, config, m, run); });
        break;
      case Mode::kInpaint: {
        const auto [composite, mask] = run.stage("load_inputs", [&] {
          if (!config.composite.empty() && !config.mask.empty()) {
            return std::make_pair(read_png(config.composite), read_mask_png(config.mask));
          }
          throw ConfigError("inpaint needs --composite and --mask");
        });
        run.stage("inpaint", [&] { inpaint_stage(composite, mask, sc, config, m, run); });
        break;
      }
      case Mode::kPipeline: {
        ScenarioRequest request;
        const PlannerDecision decision =
            run.stage("plan", [&] { return plan_stage(sc, config, backend, m, request); });
        write_text(config.out_dir / "plan.txt", format_decision(decision));
        run.artifact(config.out_dir / "plan.txt");
        if (decision.method() == Method::kPhys) {
          run.stage("simulate", [&] { simulate_stage(sc, config, m, run); });
        } else {
          const auto [composite, mask] =
              run.stage("compose", [&] { return compose_stage(decision, request, config, m, run); });
          run.stage("inpaint", [&] { inpaint_stage(composite, mask, sc, config, m, run); });
        }
        break;
      }
    }
    m.set("status", "ok");
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.error = e.what();
    m.set("status", "failed");
    m.set("failed_stage", run.current());
    m.set("error", e.what());
  }

  m.set("artifact.count", std::to_string(run.artifacts().size()));
  for (std::size_t i = 0; i < run.artifacts().size(); ++i) {
    m.set("artifact." + std::to_string(i), run.artifacts()[i]);
  }
  const std::time_t t = std::chrono::system_clock::to_time_t(started);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  m.set("timing.started_at", stamp);
  for (const auto& [name, seconds] : run.timings()) m.set("timing." + name + "_seconds", num(seconds));
  const std::chrono::duration<double> total = std::chrono::steady_clock::now() - start;
  m.set("timing.total_seconds", num(total.count()));

  if (out_ok) {
    result.manifest_path = config.out_dir / "manifest.txt";
    try {
      m.write(result.manifest_path);
    } catch (const std::exception& e) {
      result.exit_code = 1;
      result.error = e.what();
    }
  }
  return result;
}

}  // namespace interplay
